"""Threshold words over n >= 5 letters: checking, construction, verification."""
from .words import (DEFAULT_EXEMPT, EpsProfile, FactorWitness, exponent, find_forbidden_naive,
                    format_word, is_threshold, parse_word, period, threshold_ratio)
from .pansiot import Premise, canonical_premise, decode, encode
from .bccode import Flavor, phi
from .constructions import build_roots, materialize
from .fastcheck import check_fast, check_fast_report
from .conjugacy import Permutation, canonical_conjugate, conjugate_oracle, orbit_test
from .substitution import (DeltaRelation, ImageFamily, apply_three_valued,
                           enumerate_generalized_images)
from .verify import (VerificationReport, check_C3, check_l1, check_l2, check_uf,
                     construction_family, family_stats)

__version__ = "0.1.0"
