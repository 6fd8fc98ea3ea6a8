"""Validity checkers: uncertainty relations and moment-matrix positivity.

The checks form a hierarchy.  The p-uncertainty relation bounds the
power sum of moments over every pairwise anti-commuting set; positivity
of moment matrices over disjoint-support collections tightens it; the
same condition over maximal commuting collections tightens it further;
and positive-semidefiniteness of the reconstructed density matrix
(checked by the brute-force oracle) is the top of the ladder.
``classify_state`` walks the levels in order and reports the first
failure.

Every report follows one margin convention: a check passes iff its
margin is at least ``-tol``.  Uncertainty margins are ``1 - worst power
sum``; positivity margins are smallest eigenvalues.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    DomainError,
    IncompleteMomentError,
    ResourceError,
)
from .pauli import (
    PauliString,
    _bron_kerbosch,
    _cached_maximal_sets,
    commutes,
    gamma_set,
    hermitian_basis,
    pauli_product,
    product_of,
    sample_maximal_anticommuting_sets,
    symplectic_form,
)
from .states import (
    CliffordCircuit,
    CoefficientState,
    GnstState,
    MomentTable,
    _marginal_vector,
    all_outcomes,
    conjugate_pauli,
    moments_from_probabilities,
)

__all__ = [
    "ValidationReport",
    "ClassificationResult",
    "LEVELS",
    "validate_exponent",
    "check_p_uncertainty",
    "uncertainty_margin",
    "collection_moment_vector",
    "moment_matrix",
    "check_psd",
    "disjoint_support_collections",
    "check_local_moments",
    "maximal_commuting_sets",
    "check_commuting_moments",
    "classify_state",
    "two_measurement_moment_matrix",
    "two_measurement_eigenvalues",
    "SylvesterReport",
    "two_measurement_sylvester",
    "validate_gnst",
]

DEFAULT_TOL = 1e-9

# Exhaustive clique enumeration over the moment alphabet is refused
# beyond this many strings; canonical or randomized mode applies there.
MAX_EXHAUSTIVE_STRINGS = 100
MAX_LOCAL_SYSTEMS = 5
MAX_COMMUTING_SYSTEMS = 4
MAX_COLLECTION_SIZE = 12

LEVELS = ("invalid", "p-bin", "p-box", "p-nonlocal", "quantum-consistent")

StateLike = CoefficientState | GnstState | MomentTable


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of one constraint check.

    Attributes:
        constraint: Name of the checked constraint.
        passed: True iff ``margin >= -tol`` held at check time.
        margin: Slack of the constraint; negative means violated.
        worst_set: Text forms of the strings (or setting labels)
            realizing the margin.
        detail: Free-form diagnostics (mode, counts, skips).
    """

    constraint: str
    passed: bool
    margin: float
    worst_set: tuple[str, ...] = ()
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json_dict(self) -> dict:
        out = {
            "constraint": self.constraint,
            "passed": self.passed,
            "margin": self.margin,
            "worst_set": list(self.worst_set),
        }
        if self.detail:
            out["detail"] = dict(self.detail)
        return out


def validate_exponent(p: float) -> float:
    """Normalize an uncertainty exponent: any float >= 1, or infinity."""
    if p == math.inf:
        return p
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"the exponent must satisfy p >= 1, got {p}")
    return p


def _moment_items(
    state: StateLike,
) -> tuple[int, dict[tuple[int, int], float], bool]:
    """Canonical moments of a state as (n, {basis key: value}, strict).

    Strict means an absent key is *unknown* rather than zero, which is
    the situation for partially specified probability tables.  Stored
    zeros are kept: a measured zero is data.
    """
    if isinstance(state, CoefficientState):
        return state.n, {k: state.coefficient(*k) for k in state.keys()}, False
    if isinstance(state, GnstState):
        table = moments_from_probabilities(state)
        items = {k: table.value(PauliString.hermitian(table.n, *k)) for k in table.keys()}
        return table.n, items, table.strict
    if isinstance(state, MomentTable):
        items = {k: state.value(PauliString.hermitian(state.n, *k)) for k in state.keys()}
        return state.n, items, state.strict
    raise DomainError(f"cannot extract moments from {type(state).__name__}")


def _lookup(
    items: Mapping[tuple[int, int], float], string: PauliString, strict: bool
) -> float:
    sign = string.hermitian_sign()
    if string.is_identity:
        return float(sign)
    key = string.basis_key()
    if key in items:
        return sign * items[key]
    if strict:
        raise IncompleteMomentError(
            f"no moment available for {string.canonical().text()}"
        )
    return 0.0


# ---------------------------------------------------------------------------
# uncertainty relation
# ---------------------------------------------------------------------------


def _conjugation_circuits(n: int, count: int, seed: int) -> list[CliffordCircuit]:
    rng = random.Random(seed)
    names = ["H", "X", "Y", "Z"] + (["CNOT"] if n > 1 else [])
    out = []
    for _ in range(count):
        gates = []
        for _ in range(8):
            name = rng.choice(names)
            if name == "CNOT":
                c, t = rng.sample(range(n), 2)
                gates.append((name, (c, t)))
            else:
                gates.append((name, (rng.randrange(n),)))
        out.append(CliffordCircuit(n, tuple(gates)))
    return out


def check_p_uncertainty(
    state: StateLike,
    p: float,
    mode: str = "canonical",
    seed: int = 0,
    samples: int = 64,
    tol: float = DEFAULT_TOL,
) -> ValidationReport:
    """Check the power-sum uncertainty relation at exponent ``p``.

    Over every pairwise anti-commuting set of Hermitian strings the
    moments must satisfy sum |m|**p <= 1; at p = infinity the relation
    degenerates to |m| <= 1 for every single string.

    Modes:
        * ``canonical`` (default): the standard ladder set plus
          ``samples`` of its images under seeded random Clifford
          circuits.  A violation search, not a proof of validity;
          unknown moments count as 0.
        * ``exhaustive``: every maximal anti-commuting subset of the
          strings with known non-zero moments.  Complete, since zero
          moments contribute nothing to any power sum and every
          anti-commuting set's sum is dominated by a maximal one over
          the non-zero alphabet.
        * ``randomized``: ``samples`` greedy random maximal sets over
          the known alphabet.
        * ``auto``: exhaustive when the alphabet allows it, else
          canonical.

    Raises:
        DomainError: for p < 1 or an unknown mode.
        ResourceError: exhaustive mode on an oversized alphabet.
    """
    p = validate_exponent(p)
    n, items, strict = _moment_items(state)
    alphabet = tuple(
        PauliString.hermitian(n, a, b)
        for (a, b) in sorted(items)
        if items[(a, b)] != 0.0
    )

    if p == math.inf:
        # All modes coincide: the worst set is a single worst string.
        worst_abs, worst = 0.0, ()
        for s in alphabet:
            value = abs(items[s.basis_key()])
            if value > worst_abs:
                worst_abs, worst = value, (s.text(),)
        margin = 1.0 - worst_abs
        return ValidationReport(
            "p-uncertainty",
            margin >= -tol,
            margin,
            worst,
            {"p": "inf", "mode": "max", "strings": len(alphabet)},
        )

    if mode == "auto":
        mode = "exhaustive" if len(alphabet) <= MAX_EXHAUSTIVE_STRINGS else "canonical"

    if mode == "exhaustive":
        if len(alphabet) > MAX_EXHAUSTIVE_STRINGS:
            raise ResourceError(
                f"exhaustive mode is limited to {MAX_EXHAUSTIVE_STRINGS} strings "
                f"with non-zero moments, got {len(alphabet)}"
            )
        sets = _cached_maximal_sets(alphabet) if alphabet else ()
        families = [tuple(s) for s in sets]
    elif mode == "randomized":
        families = [
            tuple(s)
            for s in sample_maximal_anticommuting_sets(alphabet, samples, seed)
        ]
    elif mode == "canonical":
        families = [tuple(gamma_set(n))]
        seen = {frozenset(g.basis_key() for g in families[0])}
        for circuit in _conjugation_circuits(n, samples, seed):
            image = tuple(
                conjugate_pauli(circuit, g).canonical() for g in gamma_set(n)
            )
            key = frozenset(g.basis_key() for g in image)
            if key not in seen:
                seen.add(key)
                families.append(image)
    else:
        raise DomainError(f"unknown mode {mode!r}")

    worst_sum, worst = 0.0, ()
    for family in families:
        total = sum(abs(_lookup(items, s, strict=False)) ** p for s in family)
        if total > worst_sum:
            worst_sum = total
            worst = tuple(s.canonical().text() for s in family)
    margin = 1.0 - worst_sum
    return ValidationReport(
        "p-uncertainty",
        margin >= -tol,
        margin,
        worst,
        {"p": p, "mode": mode, "sets": len(families), "strings": len(alphabet)},
    )


def uncertainty_margin(state: StateLike, p: float, **kwargs) -> float:
    """Convenience wrapper: the margin of :func:`check_p_uncertainty`."""
    return check_p_uncertainty(state, p, **kwargs).margin


# ---------------------------------------------------------------------------
# moment matrices of commuting collections
# ---------------------------------------------------------------------------


def _collection_products(collection: Sequence[PauliString]) -> list[PauliString]:
    """Products over all member subsets; subset masks put member 0 in
    the most significant bit, matching the outcome enumeration order."""
    m = len(collection)
    if m == 0:
        raise DomainError("empty collection")
    if m > MAX_COLLECTION_SIZE:
        raise ResourceError(
            f"moment matrices are limited to {MAX_COLLECTION_SIZE} measurements"
        )
    n = collection[0].n
    for s, t in itertools.combinations(collection, 2):
        if not commutes(s, t):
            raise DomainError(f"{s.text()} and {t.text()} do not commute")
    out = []
    for mask in range(1 << m):
        members = [collection[i] for i in range(m) if mask >> (m - 1 - i) & 1]
        out.append(product_of(members, n=n))
    return out


def collection_moment_vector(
    collection: Sequence[PauliString], state: StateLike
) -> np.ndarray:
    """Subset moments of a pairwise commuting collection.

    Raises:
        IncompleteMomentError: if the state does not determine a needed
            moment.
    """
    n, items, strict = _moment_items(state)
    if collection and collection[0].n != n:
        raise DomainError("collection and state system counts differ")
    return np.array(
        [_lookup(items, s, strict) for s in _collection_products(collection)]
    )


def moment_matrix(
    collection: Sequence[PauliString],
    state: StateLike,
    scaled: bool = False,
) -> np.ndarray:
    """The moment matrix of a commuting collection.

    Entry (i, j) is the moment of the product of the subsets indexed by
    i and j, which for a commuting collection of Hermitian strings is
    exactly the subset indexed by i xor j.  With ``scaled=True`` the
    matrix is divided by its dimension, making it equal to
    B diag(outcome probabilities) B^T for the sign matrix B.
    """
    mu = collection_moment_vector(collection, state)
    size = mu.shape[0]
    idx = np.arange(size)
    k = mu[np.bitwise_xor(idx[:, None], idx[None, :])]
    return k / size if scaled else k


def check_psd(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Positive-semidefiniteness report for a real symmetric matrix.

    Passes iff the minimum eigenvalue is at least ``-tol``; the margin
    is that eigenvalue.

    Raises:
        DomainError: non-square or non-symmetric input.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    smallest = float(np.linalg.eigvalsh(m)[0])
    return ValidationReport(
        "psd", smallest >= -tol, smallest, (), {"dim": m.shape[0]}
    )


def _set_partitions(items: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + ((first,) + partition[i],) + partition[i + 1 :]
        yield ((first,),) + partition


def _part_strings(n: int, part: tuple[int, ...]) -> list[PauliString]:
    out = []
    for letters in itertools.product("XZY", repeat=len(part)):
        singles = [
            PauliString.single(n, pos, letter) for pos, letter in zip(part, letters)
        ]
        out.append(product_of(singles, n=n))
    return out


def disjoint_support_collections(n: int) -> Iterator[tuple[PauliString, ...]]:
    """Maximal collections of strings with pairwise disjoint supports.

    One collection per (system partition, letter assignment): each part
    of the partition carries one string supported on exactly that part.
    Every disjoint-support collection embeds in one of these, so its
    moment matrix is a principal submatrix of a maximal one.
    """
    for partition in _set_partitions(tuple(range(n))):
        for choice in itertools.product(*(_part_strings(n, part) for part in partition)):
            yield choice


def check_local_moments(
    state: StateLike, tol: float = DEFAULT_TOL
) -> ValidationReport:
    """Positivity of moment matrices over disjoint-support collections.

    Collections the state leaves undetermined (possible for partial
    probability tables) are skipped and counted in the report detail.

    Raises:
        ResourceError: beyond five systems.
    """
    n, items, strict = _moment_items(state)
    if n > MAX_LOCAL_SYSTEMS:
        raise ResourceError(
            f"local moment check is limited to n <= {MAX_LOCAL_SYSTEMS}"
        )
    worst_eig, worst = math.inf, ()
    evaluated = skipped = 0
    for collection in disjoint_support_collections(n):
        try:
            mu = np.array(
                [_lookup(items, s, strict) for s in _collection_products(collection)]
            )
        except IncompleteMomentError:
            skipped += 1
            continue
        evaluated += 1
        size = mu.shape[0]
        idx = np.arange(size)
        smallest = float(
            np.linalg.eigvalsh(mu[np.bitwise_xor(idx[:, None], idx[None, :])])[0]
        )
        if smallest < worst_eig:
            worst_eig = smallest
            worst = tuple(s.text() for s in collection)
    margin = 1.0 if evaluated == 0 else worst_eig
    return ValidationReport(
        "local-moments",
        margin >= -tol,
        margin,
        worst,
        {"collections": evaluated, "skipped": skipped},
    )


def _commutation_masks(strings: Sequence[PauliString]) -> list[int]:
    masks = [0] * len(strings)
    for i, s in enumerate(strings):
        for j in range(i + 1, len(strings)):
            if symplectic_form(s, strings[j]) == 0:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


@lru_cache(maxsize=None)
def maximal_commuting_sets(n: int) -> tuple[tuple[PauliString, ...], ...]:
    """All maximal pairwise commuting collections of non-identity strings.

    Each is closed under products up to sign: the product of two members
    commutes with every member, so maximality forces it back into the
    collection.  On ``n`` systems every such collection has 2**n - 1
    members.

    Raises:
        ResourceError: beyond four systems.
    """
    if n > MAX_COMMUTING_SYSTEMS:
        raise ResourceError(
            f"commuting-set enumeration is limited to n <= {MAX_COMMUTING_SYSTEMS}"
        )
    strings = tuple(hermitian_basis(n))
    adj = _commutation_masks(strings)
    cliques: list[int] = []
    _bron_kerbosch(adj, 0, (1 << len(strings)) - 1, 0, cliques)
    out = []
    for mask in cliques:
        members = tuple(strings[i] for i in range(len(strings)) if mask >> i & 1)
        out.append(members)
    out.sort(key=lambda c: tuple(s.letters() for s in c))
    return tuple(out)


def check_commuting_moments(
    state: StateLike, tol: float = DEFAULT_TOL
) -> ValidationReport:
    """Positivity of moment matrices over maximal commuting collections.

    The matrix for a collection is indexed by the identity plus all
    members; since the collection is product-closed this is its full
    group moment matrix.  Undetermined collections are skipped.

    Raises:
        ResourceError: beyond four systems.
    """
    n, items, strict = _moment_items(state)
    worst_eig, worst = math.inf, ()
    evaluated = skipped = 0
    for members in maximal_commuting_sets(n):
        elements = (PauliString.identity(n),) + members
        size = len(elements)
        k = np.empty((size, size))
        try:
            for i in range(size):
                for j in range(i, size):
                    value = _lookup(items, pauli_product(elements[i], elements[j]), strict)
                    k[i, j] = k[j, i] = value
        except IncompleteMomentError:
            skipped += 1
            continue
        evaluated += 1
        smallest = float(np.linalg.eigvalsh(k)[0])
        if smallest < worst_eig:
            worst_eig = smallest
            worst = tuple(s.text() for s in members)
    margin = 1.0 if evaluated == 0 else worst_eig
    return ValidationReport(
        "commuting-moments",
        margin >= -tol,
        margin,
        worst,
        {"collections": evaluated, "skipped": skipped},
    )


# ---------------------------------------------------------------------------
# hierarchy classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationResult:
    """Where a state sits in the validity hierarchy.

    ``level`` is one of :data:`LEVELS`; ``reports`` holds every check
    that ran, in order, the last one being the first failure (if any).
    """

    level: str
    reports: tuple[ValidationReport, ...]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "reports": [r.to_json_dict() for r in self.reports],
        }


def classify_state(
    state: StateLike,
    p: float,
    tol: float = DEFAULT_TOL,
    mode: str = "auto",
    seed: int = 0,
    samples: int = 64,
) -> ClassificationResult:
    """Run the constraint ladder bottom-up and name the reached level.

    Moments the state does not determine are treated as zero when the
    reconstructed density matrix is tested, so for partial tables the
    top level asserts consistency of one completion, not of all.

    Raises:
        ResourceError: if the density-matrix stage exceeds the dense
            oracle's size limit.
    """
    reports: list[ValidationReport] = []
    first = check_p_uncertainty(state, p, mode=mode, seed=seed, samples=samples, tol=tol)
    reports.append(first)
    if not first.passed:
        return ClassificationResult("invalid", tuple(reports))
    local = check_local_moments(state, tol=tol)
    reports.append(local)
    if not local.passed:
        return ClassificationResult("p-bin", tuple(reports))
    commuting = check_commuting_moments(state, tol=tol)
    reports.append(commuting)
    if not commuting.passed:
        return ClassificationResult("p-box", tuple(reports))

    from . import oracle

    n, items, _ = _moment_items(state)
    if isinstance(state, CoefficientState):
        coeff = state
    else:
        coeff = CoefficientState(n, items, tol=max(tol, 1e-9))
    smallest = oracle.min_eigenvalue(oracle.dense(coeff))
    passed = smallest >= -tol
    reports.append(
        ValidationReport("density-psd", passed, smallest, (), {"dim": 1 << n})
    )
    level = "quantum-consistent" if passed else "p-nonlocal"
    return ClassificationResult(level, tuple(reports))


# ---------------------------------------------------------------------------
# the two-measurement closed form
# ---------------------------------------------------------------------------


def two_measurement_moment_matrix(a: float, b: float, c: float) -> np.ndarray:
    """Moment matrix of two commuting strings with moments a, b and
    product moment c, indexed (identity, first, second, product)."""
    return np.array(
        [
            [1.0, a, b, c],
            [a, 1.0, c, b],
            [b, c, 1.0, a],
            [c, b, a, 1.0],
        ]
    )


def two_measurement_eigenvalues(
    a: float, b: float, c: float
) -> tuple[float, float, float, float]:
    """Closed-form spectrum of the two-measurement moment matrix, ascending.

    The matrix is the group matrix of the Klein four-group, so its
    eigenvalues are the character sums: 1 plus the signed total of
    (a, b, c) with an even number of minus signs.
    """
    eigs = (
        1.0 + a + b + c,
        1.0 + a - b - c,
        1.0 - a + b - c,
        1.0 - a - b + c,
    )
    return tuple(sorted(eigs))


@dataclass(frozen=True)
class SylvesterReport:
    box_ok: bool
    cubic_ok: bool
    det_ok: bool

    @property
    def passed(self) -> bool:
        return self.box_ok and self.cubic_ok and self.det_ok

    def __bool__(self) -> bool:
        return self.passed


def two_measurement_sylvester(
    a: float, b: float, c: float, tol: float = 0.0
) -> SylvesterReport:
    """Principal-minor positivity test for the two-measurement matrix.

    Three conditions, one per minor size: every 2x2 minor is 1 - x**2
    for a coordinate x (the box), every 3x3 minor equals
    1 - a**2 - b**2 - c**2 + 2abc (the cubic), and the determinant is
    the product of the four closed-form eigenvalues.  Together they are
    equivalent to positive semidefiniteness; no proper subset is.
    """
    box = max(abs(a), abs(b), abs(c)) <= 1.0 + tol
    cubic = 1.0 - a * a - b * b - c * c + 2.0 * a * b * c >= -tol
    e1, e2, e3, e4 = (
        1.0 + a + b + c,
        1.0 + a - b - c,
        1.0 - a + b - c,
        1.0 - a - b + c,
    )
    det = e1 * e2 * e3 * e4 >= -tol
    return SylvesterReport(box, cubic, det)


# ---------------------------------------------------------------------------
# probability-table structural validation
# ---------------------------------------------------------------------------


def validate_gnst(state: GnstState, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Structural validation of a probability table, as one report.

    Four sub-checks: every setting's distribution is normalized; every
    probability is non-negative; marginal distributions do not depend on
    the measurement choices outside the marginalized systems; and where
    two settings overlap, the moments of the shared sub-collection
    agree.  The aggregate passes iff all four do; its margin is the
    worst sub-margin and the sub-reports ride along in the detail.
    Reports instead of raising, so tables built with ``check=False``
    can be diagnosed.
    """
    n = state.n
    settings = state.settings()

    norm_dev, norm_worst = 0.0, ()
    pos_min, pos_worst = 1.0, ()
    for setting in settings:
        probs = state.probabilities(setting)
        dev = abs(sum(probs) - 1.0)
        if dev > norm_dev:
            norm_dev, norm_worst = dev, (str(setting.labels),)
        low = min(probs)
        if low < pos_min:
            pos_min, pos_worst = low, (str(setting.labels),)

    signal_dev, signal_worst = 0.0, ()
    overlap_dev, overlap_worst = 0.0, ()
    if n > 1:
        outcomes = tuple(all_outcomes(n))
        for keep in itertools.chain.from_iterable(
            itertools.combinations(range(n), r) for r in range(1, n)
        ):
            margins: dict[tuple, tuple[tuple[float, ...], tuple[int, ...]]] = {}
            moments: dict[tuple, tuple[float, tuple[int, ...]]] = {}
            for setting in settings:
                sub = tuple(setting.labels[i] for i in keep)
                probs = state.probabilities(setting)
                marg = _marginal_vector(probs, n, keep)
                if sub in margins:
                    reference, source = margins[sub]
                    dev = max(abs(x - y) for x, y in zip(marg, reference))
                    if dev > signal_dev:
                        signal_dev = dev
                        signal_worst = (str(source), str(setting.labels))
                else:
                    margins[sub] = (marg, setting.labels)
                value = sum(
                    p * math.prod(o[i] for i in keep)
                    for p, o in zip(probs, outcomes)
                )
                if sub in moments:
                    reference_m, source = moments[sub]
                    dev = abs(value - reference_m)
                    if dev > overlap_dev:
                        overlap_dev = dev
                        overlap_worst = (str(source), str(setting.labels))
                else:
                    moments[sub] = (value, setting.labels)

    checks = (
        ValidationReport("normalization", norm_dev <= tol, -norm_dev, norm_worst),
        ValidationReport("positivity", pos_min >= -tol, pos_min, pos_worst),
        ValidationReport("no-signaling", signal_dev <= tol, -signal_dev, signal_worst),
        ValidationReport(
            "overlap-consistency", overlap_dev <= tol, -overlap_dev, overlap_worst
        ),
    )
    worst = min(checks, key=lambda r: r.margin)
    return ValidationReport(
        "gnst-structure",
        all(r.passed for r in checks),
        worst.margin,
        worst.worst_set,
        {"checks": [r.to_json_dict() for r in checks]},
    )
