"""
Step2: 実現可能性
許容不動点数と軌道長分布
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_fixed_points_module = importlib.import_module('src.modules.step2.01_fixed_points')
_orbit_distribution_module = importlib.import_module('src.modules.step2.02_orbit_distribution')
_step2_processor_module = importlib.import_module('src.modules.step2.03_step2_processor')

FixedPointProfile = _fixed_points_module.FixedPointProfile
admissible_fixed_points = _fixed_points_module.admissible_fixed_points

OrbitDistribution = _orbit_distribution_module.OrbitDistribution
orbit_distributions = _orbit_distribution_module.orbit_distributions
fixed_point_grid = _orbit_distribution_module.fixed_point_grid
summarize_actions = _orbit_distribution_module.summarize_actions
group_primes = _orbit_distribution_module.group_primes
distribution_from_tuple = _orbit_distribution_module.distribution_from_tuple

Step2Processor = _step2_processor_module.Step2Processor
distribution_to_dict = _step2_processor_module.distribution_to_dict

__all__ = [
    'FixedPointProfile',
    'admissible_fixed_points',
    'OrbitDistribution',
    'orbit_distributions',
    'fixed_point_grid',
    'summarize_actions',
    'group_primes',
    'distribution_from_tuple',
    'Step2Processor',
    'distribution_to_dict',
]
