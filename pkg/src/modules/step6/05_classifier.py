"""
Step6-05: 同型分類
標準形証明書による同型類への分割、自己双対判定、双対対の照合、自己同型群の位数ごとの集計
"""

import importlib
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from joblib import Parallel, delayed

_step1 = importlib.import_module('src.modules.step1')
_labelling_module = importlib.import_module('src.modules.step6.01_canonical_labelling')
_automorphism_module = importlib.import_module('src.modules.step6.04_automorphism_group')

IncidenceMatrix = _step1.IncidenceMatrix
dual = _step1.dual
CanonicalCertificate = _labelling_module.CanonicalCertificate
canonical_form = _labelling_module.canonical_form
automorphism_fingerprint = _automorphism_module.automorphism_fingerprint

logger = logging.getLogger(__name__)


@dataclass
class DesignClass:
    """
    Attributes:
        class_id: 証明書の昇順で振った番号（0始まり）
        certificate: 標準形証明書
        representative: 入力順で最初に現れた代表
        members: 入力中の個数
        self_dual: 双対が同じ類に属するか
        dual_class: 双対の属する類（入力に無ければ None）
        fingerprint: 自己同型群の指紋
    """

    class_id: int
    certificate: CanonicalCertificate
    representative: IncidenceMatrix
    members: int
    self_dual: bool
    dual_class: Optional[int]
    fingerprint: Optional[object] = None

    @property
    def aut_order(self) -> Optional[int]:
        return self.fingerprint.order if self.fingerprint is not None else None

    def to_dict(self) -> Dict:
        return {
            "class_id": self.class_id,
            "certificate": self.certificate.hex(),
            "members": self.members,
            "aut_order": self.aut_order,
            "fingerprint": self.fingerprint.to_dict() if self.fingerprint is not None else None,
            "self_dual": self.self_dual,
            "dual_class": self.dual_class,
            "representative": self.representative.to_text(),
        }


@dataclass
class Classification:
    classes: List[DesignClass] = field(default_factory=list)
    designs: int = 0

    @property
    def self_dual(self) -> int:
        return sum(1 for c in self.classes if c.self_dual)

    @property
    def dual_pairs(self) -> int:
        return sum(
            1 for c in self.classes
            if not c.self_dual and c.dual_class is not None and c.class_id < c.dual_class
        )

    @property
    def unmatched(self) -> int:
        """双対の類が入力に無い類"""
        return sum(1 for c in self.classes if not c.self_dual and c.dual_class is None)

    def counts(self) -> Dict[str, int]:
        return {
            "designs": self.designs,
            "classes": len(self.classes),
            "self_dual": self.self_dual,
            "dual_pairs": self.dual_pairs,
            "unmatched": self.unmatched,
        }

    def by_aut_order(self) -> Dict[int, Dict[str, int]]:
        """自己同型群の位数ごとの 類数・自己双対数・双対対数"""
        table: Dict[int, Dict[str, int]] = defaultdict(lambda: {"classes": 0, "self_dual": 0, "dual_pairs": 0})
        for c in self.classes:
            if c.aut_order is None:
                continue
            row = table[c.aut_order]
            row["classes"] += 1
            if c.self_dual:
                row["self_dual"] += 1
            elif c.dual_class is not None and c.class_id < c.dual_class:
                row["dual_pairs"] += 1
        return dict(sorted(table.items()))

    def to_dict(self) -> Dict:
        return {
            "counts": self.counts(),
            "by_aut_order": {str(k): v for k, v in self.by_aut_order().items()},
            "classes": [c.to_dict() for c in self.classes],
        }


def _certify(m: IncidenceMatrix):
    """ワーカー処理: 設計とその双対の証明書"""
    return canonical_form(m), canonical_form(dual(m))


def classify(designs: Sequence[IncidenceMatrix], n_jobs: int = 1,
             with_groups: bool = True) -> Classification:
    """
    設計を同型類に分割

    Args:
        designs: 接続行列の列（全て同じパラメータ）
        n_jobs: 証明書計算の並列数
        with_groups: 各類の代表について自己同型群の指紋を計算するか

    Raises:
        ValueError: パラメータが混在している場合
    """
    designs = list(designs)
    if not designs:
        return Classification()
    params = {m.params for m in designs}
    if len(params) > 1:
        raise ValueError(f"パラメータの異なる設計が混在しています: {sorted(p.header for p in params)}")

    if n_jobs > 1 and len(designs) > 1:
        certs = Parallel(n_jobs=n_jobs)(delayed(_certify)(m) for m in designs)
    else:
        certs = [_certify(m) for m in designs]

    first_index: Dict[bytes, int] = {}
    members: Dict[bytes, int] = defaultdict(int)
    dual_of: Dict[bytes, bytes] = {}
    for i, (cert, dual_cert) in enumerate(certs):
        first_index.setdefault(cert.data, i)
        members[cert.data] += 1
        dual_of[cert.data] = dual_cert.data

    ordered = sorted(first_index)
    class_id = {data: i for i, data in enumerate(ordered)}
    representatives = [designs[first_index[data]] for data in ordered]

    fingerprints: List[Optional[object]] = [None] * len(ordered)
    if with_groups:
        if n_jobs > 1 and len(ordered) > 1:
            fingerprints = Parallel(n_jobs=n_jobs)(
                delayed(automorphism_fingerprint)(m) for m in representatives
            )
        else:
            fingerprints = [automorphism_fingerprint(m) for m in representatives]

    classes = []
    for i, data in enumerate(ordered):
        partner = dual_of[data]
        classes.append(DesignClass(
            class_id=i,
            certificate=CanonicalCertificate(data),
            representative=representatives[i],
            members=members[data],
            self_dual=partner == data,
            dual_class=class_id.get(partner),
            fingerprint=fingerprints[i],
        ))
    result = Classification(classes=classes, designs=len(designs))
    logger.debug(f"分類: {result.counts()}")
    return result


def write_classification(path: str, classification: Classification) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(classification.to_dict(), f, ensure_ascii=False, indent=2)
