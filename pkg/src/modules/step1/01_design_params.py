"""
Step1-01: 設計パラメータ
対称 2-(v,k,λ) 設計のパラメータと導出定数
"""

import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class DesignParams:
    """
    対称 2-(v,k,λ) 設計のパラメータ

    Attributes:
        v: 点（ブロック）の個数
        k: ブロックサイズ
        lam: 2点を同時に含むブロック数 λ
    """

    v: int
    k: int
    lam: int

    def __post_init__(self):
        for name, value in (("v", self.v), ("k", self.k), ("lambda", self.lam)):
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ValueError(f"{name} は正の整数である必要があります: {value!r}")
        if self.k * (self.k - 1) != self.lam * (self.v - 1):
            raise ValueError(
                f"許容されないパラメータ: k(k-1)={self.k * (self.k - 1)} != "
                f"λ(v-1)={self.lam * (self.v - 1)}"
            )
        if not (0 < self.lam < self.k < self.v - 1):
            raise ValueError(
                f"自明な設計です: 0 < λ < k < v-1 を満たしません ({self.v},{self.k},{self.lam})"
            )

    @property
    def n(self) -> int:
        """位数 n = k - λ"""
        return self.k - self.lam

    @property
    def sqrt_n(self) -> Optional[int]:
        """n が平方数ならその平方根、そうでなければ None"""
        root = math.isqrt(self.n)
        return root if root * root == self.n else None

    @property
    def header(self) -> str:
        return f"design {self.v} {self.k} {self.lam}"

    def __str__(self) -> str:
        return f"2-({self.v},{self.k},{self.lam})"
