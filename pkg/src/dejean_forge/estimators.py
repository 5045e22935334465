"""Estimator-style wrappers (fit / predict / transform, get_params).

Inputs are sequences of words of varying length, so array validation is
done here rather than through ``check_array``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .fastcheck import check_fast
from .substitution import ImageFamily, apply_three_valued
from .words import DEFAULT_EXEMPT, EpsProfile, check_word, parse_word


def validate_words(X, n: int) -> list:
    """List of integer words over n letters; strings are parsed."""
    if isinstance(X, (str, bytes)) or not hasattr(X, "__iter__"):
        raise ValueError("X must be a sequence of words")
    out = []
    for w in X:
        if isinstance(w, str):
            w = parse_word(w, n)
        else:
            w = [int(x) for x in w]
            check_word(w, n)
        out.append(w)
    return out


def validate_epsilon(eps) -> Fraction:
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    return eps


class ThresholdClassifier(ClassifierMixin, BaseEstimator):
    """Labels a word 1 when it has no forbidden factor, else 0.

    ``fit`` only validates the parameters; the rule is fixed by n, epsilon
    and the exempt repeat lengths.
    """

    def __init__(self, n: int = 5, epsilon=0, exempt=tuple(sorted(DEFAULT_EXEMPT))):
        self.n = n
        self.epsilon = epsilon
        self.exempt = exempt

    def fit(self, X=None, y=None):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        self.profile_ = EpsProfile(validate_epsilon(self.epsilon), frozenset(self.exempt))
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "profile_")
        words = validate_words(X, self.n)
        return np.array([int(check_fast(w, self.n, self.profile_) is None) for w in words])

    def witnesses(self, X) -> list:
        check_is_fitted(self, "profile_")
        return [check_fast(w, self.n, self.profile_) for w in validate_words(X, self.n)]


class ThreeValuedSubstitution(TransformerMixin, BaseEstimator):
    """Maps words through the cyclic three-valued substitution of a family."""

    def __init__(self, family: Optional[ImageFamily] = None):
        self.family = family

    def fit(self, X=None, y=None):
        if not isinstance(self.family, ImageFamily):
            raise ValueError("family must be an ImageFamily")
        if any(len(g) != 3 for g in self.family.images_by_letter):
            raise ValueError("three-valued substitution needs |V_a| = 3")
        self.n_ = self.family.n
        self.L_ = self.family.L
        self.letters_ = self.family.letters
        return self

    def transform(self, X) -> list:
        check_is_fitted(self, "n_")
        return [apply_three_valued(w, self.family) for w in validate_words(X, self.letters_)]
