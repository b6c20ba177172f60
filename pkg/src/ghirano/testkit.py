"""Random instances with known answers, and the property-trial runner.

Every matrix is built in Jordan coordinates and then moved by a similarity
``S = U diag(d) V`` with Haar unitaries ``U``, ``V`` and ``d`` spread
log-uniformly over ``[1, cond_bound]``, so ``cond(S)`` equals the bound by
construction and ``S^{-1} = V^H diag(1/d) U^H`` needs no solve. Ground truth
(Drazin inverse, Hirano certificate, spectrum membership) comes from the
Jordan data, never from the production kernels.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Sequence

import numpy as np

from . import additive, blockmat, cline
from .core import DEFAULT_POLICY, NumericPolicy, _freeze, classify, in_comm2, is_nilpotent, residual
from .errors import HiranoError, PreconditionError
from .hirano import (
    HiranoCertificate,
    certificate_residuals,
    formula_inverse,
    halves,
    has_hirano,
    hirano_inverse,
    power_hirano,
    corner_hirano,
)

HIRANO_EIGS = (-1, 0, 1)
NEGATIVE_EIGS = (2, 0.5, 1j)
WEAK_PAIR_FAMILIES = ("poly-commuting", "block-triangular", "orthogonal")
COMMUTING_PAIR_FAMILIES = ("poly-commuting", "orthogonal")

# conditioning used inside trials; products of two such similarities stay within 100
TRIAL_COND = 10.0


# ---------------------------------------------------------------------------
# Jordan construction


@dataclass(frozen=True)
class JordanSpec:
    """Jordan data ``[(eigenvalue, size), ...]`` plus the similarity to apply.

    ``similarity_seed=None`` means the identity similarity.
    """

    blocks: tuple[tuple[complex, int], ...]
    similarity_seed: int | None = None
    cond_bound: float = 1.0

    def __post_init__(self):
        blocks = []
        for lam, size in self.blocks:
            lam = complex(lam)
            if not np.isfinite(lam):
                raise ValueError(f"eigenvalue must be finite, got {lam!r}")
            if isinstance(size, bool) or int(size) != size or size < 1:
                raise ValueError(f"block size must be a positive integer, got {size!r}")
            blocks.append((lam, int(size)))
        if not blocks:
            raise ValueError("at least one Jordan block is required")
        kappa = float(self.cond_bound)
        if not np.isfinite(kappa) or kappa < 1.0:
            raise ValueError(f"cond_bound must be >= 1, got {self.cond_bound!r}")
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "cond_bound", kappa)

    @property
    def dim(self) -> int:
        return sum(size for _, size in self.blocks)

    @property
    def eigenvalues(self) -> list[complex]:
        return [lam for lam, size in self.blocks for _ in range(size)]

    def is_hirano(self) -> bool:
        return all(lam in HIRANO_EIGS for lam, _ in self.blocks)


@dataclass(frozen=True)
class JordanInstance:
    a: np.ndarray
    j: np.ndarray
    s: np.ndarray
    s_inv: np.ndarray
    spec: JordanSpec

    def lift(self, x) -> np.ndarray:
        """Move a matrix from Jordan coordinates to the coordinates of ``a``."""
        return self.s @ x @ self.s_inv


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def similarity(rng: np.random.Generator, n: int, cond_bound: float):
    """``(S, S^{-1})`` with ``cond_2(S) = cond_bound`` exactly (for ``n >= 2``)."""
    u = random_unitary(rng, n)
    v = random_unitary(rng, n)
    if n == 1 or cond_bound == 1.0:
        d = np.ones(n)
    else:
        d = np.exp(rng.uniform(0.0, np.log(cond_bound), n))
        d[0] = 1.0
        d[-1] = cond_bound
    s = (u * d) @ v
    s_inv = v.conj().T @ (u.conj().T / d[:, None])
    return s, s_inv


def shift(size: int) -> np.ndarray:
    return np.eye(size, k=1, dtype=complex)


def jordan_block(lam: complex, size: int) -> np.ndarray:
    return lam * np.eye(size, dtype=complex) + shift(size)


def block_diag(*mats) -> np.ndarray:
    mats = [np.atleast_2d(np.asarray(m, dtype=complex)) for m in mats]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=complex)
    i = j = 0
    for m in mats:
        out[i : i + m.shape[0], j : j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def _block_inverse(lam: complex, size: int) -> np.ndarray:
    """Drazin inverse of one Jordan block: the exact inverse, or 0 for ``lam = 0``."""
    if lam == 0:
        return np.zeros((size, size), dtype=complex)
    # (lam I + N)^{-1} = sum_j (-1)^j lam^{-(j+1)} N^j; integer coefficients for lam = +-1
    if lam in (1, -1):
        l = int(lam.real)
        coeffs = [(-1) ** j * l ** (j + 1) for j in range(size)]
    else:
        coeffs = [(-1) ** j * lam ** (-(j + 1)) for j in range(size)]
    out = np.zeros((size, size), dtype=complex)
    for j, cf in enumerate(coeffs):
        out += cf * np.eye(size, k=j)
    return out


def _similarity_for(spec: JordanSpec):
    n = spec.dim
    if spec.similarity_seed is None:
        return np.eye(n, dtype=complex), np.eye(n, dtype=complex)
    return similarity(np.random.default_rng(spec.similarity_seed), n, spec.cond_bound)


def gen_jordan(spec: JordanSpec) -> JordanInstance:
    j = block_diag(*(jordan_block(lam, size) for lam, size in spec.blocks))
    s, s_inv = _similarity_for(spec)
    return JordanInstance(_freeze(s @ j @ s_inv), _freeze(j), _freeze(s), _freeze(s_inv), spec)


def jordan_drazin(spec: JordanSpec) -> np.ndarray:
    """Drazin inverse of ``gen_jordan(spec).a`` from the Jordan data alone."""
    inst = gen_jordan(spec)
    return _freeze(inst.lift(block_diag(*(_block_inverse(lam, n) for lam, n in spec.blocks))))


def gen_hirano(spec: JordanSpec) -> tuple[np.ndarray, HiranoCertificate]:
    """A matrix with spectrum in {-1, 0, 1} and its certificate computed blockwise."""
    if not spec.is_hirano():
        bad = sorted({str(lam) for lam, _ in spec.blocks if lam not in HIRANO_EIGS})
        raise ValueError(f"eigenvalues outside {{-1, 0, 1}}: {', '.join(bad)}")
    inst = gen_jordan(spec)
    parts = {k: [] for k in "bewfg"}
    for lam, size in spec.blocks:
        i = np.eye(size, dtype=complex)
        z = np.zeros((size, size), dtype=complex)
        parts["b"].append(_block_inverse(lam, size))
        parts["e"].append(lam * i)
        parts["w"].append(shift(size))
        parts["f"].append(i if lam == 1 else z)
        parts["g"].append(i if lam == -1 else z)
    hat = {k: block_diag(*v) for k, v in parts.items()}
    lifted = {k: _freeze(inst.lift(v)) for k, v in hat.items()}
    c = _freeze(inst.lift(hat["b"] @ hat["b"]))
    cert = HiranoCertificate(lifted["b"], lifted["e"], lifted["w"], lifted["f"], lifted["g"], c)
    res = certificate_residuals(inst.a, cert)
    cert = HiranoCertificate(cert.b, cert.e, cert.w, cert.f, cert.g, c, MappingProxyType(res))
    return inst.a, cert


def random_sizes(rng: np.random.Generator, n: int, max_block: int) -> list[int]:
    sizes = []
    left = n
    while left:
        s = int(rng.integers(1, min(max_block, left) + 1))
        sizes.append(s)
        left -= s
    return sizes


def random_spec(
    rng: np.random.Generator,
    n: int,
    eigs: Sequence[complex] = HIRANO_EIGS,
    cond_bound: float = TRIAL_COND,
    max_block: int = 3,
) -> JordanSpec:
    sizes = random_sizes(rng, n, max_block)
    picks = rng.integers(0, len(eigs), len(sizes))
    blocks = [(eigs[int(k)], s) for k, s in zip(picks, sizes)]
    return JordanSpec(blocks, int(rng.integers(2**63)), cond_bound)


def random_mixed_spec(rng: np.random.Generator, n: int, cond_bound: float = TRIAL_COND) -> JordanSpec:
    """Half Hirano, half with at least one eigenvalue from 2, 0.5, i; blocks of size <= 2."""
    if rng.random() < 0.5:
        return random_spec(rng, n, HIRANO_EIGS, cond_bound, max_block=2)
    sizes = random_sizes(rng, n, 2)
    pool = HIRANO_EIGS + NEGATIVE_EIGS
    eigs = [pool[int(k)] for k in rng.integers(0, len(pool), len(sizes))]
    k = int(rng.integers(len(sizes)))
    eigs[k] = NEGATIVE_EIGS[int(rng.integers(len(NEGATIVE_EIGS)))]
    return JordanSpec(list(zip(eigs, sizes)), int(rng.integers(2**63)), cond_bound)


def _random_matrix(rng, rows, cols) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def _invertible(rng, n, cond_bound=TRIAL_COND):
    return similarity(rng, n, float(rng.uniform(1.0, cond_bound)))


def _kappa(rng) -> float:
    return float(rng.uniform(1.0, TRIAL_COND))


# ---------------------------------------------------------------------------
# pairs


def _poly_options(j: np.ndarray, nilpotent: bool) -> list[np.ndarray]:
    """Hirano (or nilpotent) polynomials in the Jordan matrix ``j``."""
    n = j.shape[0]
    i = np.eye(n, dtype=complex)
    if nilpotent:
        return [j, -j, j @ j, j + j @ j, j @ j @ j, np.zeros_like(j)]
    diag = np.diag(np.diag(j))
    return [j, -j, j @ j, j @ j @ j, diag, j - diag, (diag @ diag + diag) / 2, i, np.zeros_like(j)]


def _pick(rng, options):
    return options[int(rng.integers(len(options)))]


def _base(rng, n, nilpotent: bool) -> JordanInstance:
    eigs = (0,) if nilpotent else HIRANO_EIGS
    return gen_jordan(random_spec(rng, n, eigs, _kappa(rng)))


def _split(rng, n) -> tuple[int, int]:
    if n == 1:
        return 1, 0
    p = int(rng.integers(1, n))
    return p, n - p


def gen_weak_comm_pair(
    seed: int,
    dim: int,
    family: str,
    pol: NumericPolicy = DEFAULT_POLICY,
    nilpotent: bool = False,
) -> additive.PairInstance:
    """A pair with ``a^2 b = aba`` and ``b^2 a = bab`` by construction.

    ``poly-commuting``: two Hirano polynomials in one Hirano matrix.
    ``block-triangular``: ``a = diag(A1, 0)``, ``b = [[B1, 0], [C, B2]]`` with
    ``A1 B1 = B1 A1`` and ``B2 C = 0``, so ``ab != ba`` in general.
    ``orthogonal``: ``ab = ba = 0``.
    ``nilpotent=True`` draws every ingredient nilpotent.
    """
    if family not in WEAK_PAIR_FAMILIES:
        raise ValueError(f"unknown pair family {family!r}; expected one of {WEAK_PAIR_FAMILIES}")
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    dim = int(dim)
    rng = np.random.default_rng(seed)
    if family == "poly-commuting":
        m = _base(rng, dim, nilpotent)
        opts = _poly_options(m.j, nilpotent)
        a, b = m.lift(_pick(rng, opts)), m.lift(_pick(rng, opts))
    else:
        p1, p2 = _split(rng, dim)
        m1 = _base(rng, p1, nilpotent)
        if family == "block-triangular":
            opts = _poly_options(m1.j, nilpotent)
            a1, b1 = m1.lift(_pick(rng, opts)), m1.lift(_pick(rng, opts))
            a_hat = block_diag(a1, np.zeros((p2, p2)))
            b_hat = block_diag(b1, np.zeros((p2, p2)))
            if p2:
                # B2 singular; C maps into ker B2 so that B2 C = 0
                spec2 = random_spec(rng, p2, (0,) if nilpotent else HIRANO_EIGS, 1.0)
                blocks = list(spec2.blocks)
                if all(lam != 0 for lam, _ in blocks):
                    blocks[0] = (0, blocks[0][1])
                j2 = block_diag(*(jordan_block(lam, s) for lam, s in blocks))
                ker = np.zeros(p2)
                start = 0
                for lam, s in blocks:
                    if lam == 0:
                        ker[start] = 1.0
                    start += s
                b_hat[p1:, p1:] = j2
                b_hat[p1:, :p1] = ker[:, None] * _random_matrix(rng, p2, p1)
        else:
            a_hat = block_diag(m1.lift(m1.j), np.zeros((p2, p2)))
            b_hat = np.zeros((dim, dim), dtype=complex)
            if p2:
                m2 = _base(rng, p2, nilpotent)
                b_hat[p1:, p1:] = m2.a
        s, s_inv = _invertible(rng, dim)
        a, b = s @ a_hat @ s_inv, s @ b_hat @ s_inv
    return additive.PairInstance.build(a, b, pol, family=family)


# ---------------------------------------------------------------------------
# trials


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    family: str
    hypotheses_met: bool
    conclusion_ok: bool
    residual_max: float
    detail: str

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "family": self.family,
            "hypotheses_met": self.hypotheses_met,
            "conclusion_ok": self.conclusion_ok,
            "residual_max": self.residual_max,
            "detail": self.detail,
        }


@dataclass
class _Result:
    family: str
    ok: bool
    residual: float = 0.0
    detail: str = ""
    met: bool = True


def _skip(family: str, detail: str) -> _Result:
    return _Result(family, True, 0.0, detail, met=False)


def _dim(rng, lo=1, hi=8) -> int:
    return int(rng.integers(lo, hi + 1))


def _mixed(rng):
    spec = random_mixed_spec(rng, _dim(rng), _kappa(rng))
    return spec, gen_jordan(spec).a, ("hirano" if spec.is_hirano() else "negative")


def _expect(family, got, want, what) -> _Result:
    return _Result(family, got == want, 0.0, f"{what}={got} expected {want}")


def _t_nil_closure(rng, pol):
    fam = _pick(rng, WEAK_PAIR_FAMILIES)
    p = gen_weak_comm_pair(int(rng.integers(2**63)), _dim(rng), fam, pol, nilpotent=True)
    if not p.weak_comm:
        return _skip(fam, "pair not weakly commuting")
    s, m = is_nilpotent(p.a + p.b, pol), is_nilpotent(p.a @ p.b, pol)
    return _Result(fam, s and m, 0.0, f"sum nilpotent={s}, product nilpotent={m}")


def _t_cubic(rng, pol):
    spec, a, fam = _mixed(rng)
    return _expect(fam, has_hirano(a, pol), spec.is_hirano(), "has_hirano")


def _t_power(rng, pol):
    a, _ = gen_hirano(random_spec(rng, _dim(rng), cond_bound=_kappa(rng)))
    m = int(rng.integers(1, 6))
    got = power_hirano(a, m, pol)
    return _Result("hirano", got, 0.0, f"m={m}, has_hirano(a^m)={got}")


def _t_halves(rng, pol):
    spec, a, fam = _mixed(rng)
    return _expect(fam, halves(a, pol)[2], spec.is_hirano(), "halves flag")


def _t_tripotent(rng, pol):
    spec, a, fam = _mixed(rng)
    cert = hirano_inverse(a, pol)
    if (cert is None) == spec.is_hirano():
        return _Result(fam, False, 0.0, f"certificate present={cert is not None}")
    if cert is None:
        return _Result(fam, True, 0.0, "no certificate, as expected")
    _, oracle = gen_hirano(spec)
    diff = max(residual(cert.e, oracle.e, oracle.e), residual(cert.b, oracle.b, oracle.b))
    worst = max(max(cert.residuals.values()), diff)
    return _Result(fam, diff <= pol.tol_residual, worst, f"oracle difference {diff:.3e}")


def _t_spectrum(rng, pol):
    spec, a, fam = _mixed(rng)
    rep = classify(a, pol)
    eigs = spec.eigenvalues
    want = (
        all(lam == 0 for lam in eigs),
        all(lam in (0, 1) for lam in eigs),
        spec.is_hirano(),
    )
    got = (rep.is_qnil, rep.is_gs_drazin, rep.is_hirano)
    return _Result(fam, got == want, 0.0, f"(qnil, gs, hirano)={got} expected {want}")


def _t_formula(rng, pol):
    n = _dim(rng)
    spec = random_spec(rng, n, cond_bound=_kappa(rng))
    a, oracle = gen_hirano(spec)
    cert = hirano_inverse(a, pol)
    c = formula_inverse(a, cert.e)
    r_sq = residual(c, oracle.c, oracle.c)
    r_b = residual(a @ c, oracle.b, a, c)
    ok = r_sq <= pol.tol_residual and r_b <= pol.tol_residual
    detail = f"formula vs b^2 {r_sq:.3e}, a*formula vs b {r_b:.3e}"
    if n <= 6:
        e2, b2 = in_comm2(a, cert.e, pol), in_comm2(a, cert.b, pol)
        ok = ok and e2 and b2
        detail += f", e in comm2={e2}, b in comm2={b2}"
    return _Result("hirano", ok, max(r_sq, r_b), detail)


def _mixed_x(rng, n) -> JordanInstance:
    r = rng.random()
    if r < 1 / 3:
        spec = random_spec(rng, n, (0,), _kappa(rng))
    elif r < 2 / 3:
        spec = random_spec(rng, n, HIRANO_EIGS, _kappa(rng))
    else:
        spec = random_mixed_spec(rng, n, _kappa(rng))
    return gen_jordan(spec)


def _quad_cline_pair(rng, pol):
    n = _dim(rng)
    g, g_inv = _invertible(rng, n)
    x = _mixed_x(rng, n).a
    b = g_inv @ x
    return cline.QuadInstance.build(g, b, b, g, pol, family="cline-pair")


def _quad_corner(rng, pol):
    # aba = aca through c = b + k with aka = 0, and d = a
    n = _dim(rng, 2)
    spec = random_mixed_spec(rng, n - 1, _kappa(rng))
    spec = JordanSpec(spec.blocks + ((0, 1),), spec.similarity_seed, spec.cond_bound)
    a = gen_jordan(spec).a
    eps = _pick(rng, (1.0, -1.0, 2.0))
    b = eps * jordan_drazin(spec)
    ap = np.linalg.pinv(a, rcond=1e-10)
    i = np.eye(n)
    k = (i - ap @ a) @ _random_matrix(rng, n, n) + _random_matrix(rng, n, n) @ (i - a @ ap)
    return cline.QuadInstance.build(a, b, b + k, a, pol, family="corner")


def _quad_shift(rng, pol):
    q = cline.truncated_shift_quad(int(rng.integers(3, 5)), pol)
    n = q.a.shape[0]
    s, s_inv = _invertible(rng, n)
    a, b, c, d = (s @ x @ s_inv for x in (q.a, q.b, q.c, q.d))
    return cline.QuadInstance.build(a, b, c, d, pol, family="shift-truncation")


def _block_selector(rng, spec: JordanSpec) -> np.ndarray:
    """0/1 diagonal constant on each Jordan block, so it commutes with the Jordan form."""
    return np.concatenate([np.full(s, float(rng.random() < 0.5)) for _, s in spec.blocks])


def _quad_from_products(rng, pol, family):
    n = _dim(rng)
    g1, g1_inv = _invertible(rng, n)
    g2, g2_inv = _invertible(rng, n)
    x = _mixed_x(rng, n)
    if family == "neg-square":
        y = -x.a
    elif family == "product-equal":
        y = x.a
    else:
        # y = x (I - 2P) for a spectral block projector P, so y^2 = x^2
        y = x.a @ x.lift(np.diag(1.0 - 2.0 * _block_selector(rng, x.spec)))
    return cline.QuadInstance.build(g1, g2_inv @ y, g1_inv @ x.a, g2, pol, family=family)


def _quad(rng, pol, families):
    fam = _pick(rng, families)
    if fam == "cline-pair":
        return _quad_cline_pair(rng, pol)
    if fam == "corner":
        return _quad_corner(rng, pol)
    if fam == "shift-truncation":
        return _quad_shift(rng, pol)
    return _quad_from_products(rng, pol, fam)


_WEAK_QUADS = ("cline-pair", "corner", "shift-truncation", "neg-square", "product-equal")


def _t_quad_qnil(rng, pol):
    q = _quad(rng, pol, _WEAK_QUADS)
    if not q.hyp_weak:
        return _skip(q.family, "weak hypotheses fail")
    return _Result(q.family, cline.qnil_transfer(q, pol), 0.0, "(ac)^2 vs (bd)^2 nilpotency")


def _transfer(q, pol, need_strong=False):
    if not q.hyp_weak or (need_strong and not q.hyp_strong):
        return _skip(q.family, "hypotheses fail")
    left = has_hirano(q.a @ q.c, pol)
    ok = cline.hirano_transfer(q, pol)
    return _Result(q.family, ok, 0.0, f"has_hirano(ac)={left}, agreement={ok}")


def _t_quad_hirano(rng, pol):
    return _transfer(_quad(rng, pol, _WEAK_QUADS), pol)


def _t_quad_strong(rng, pol):
    return _transfer(_quad(rng, pol, ("cline-pair", "corner", "product-equal")), pol, True)


def _t_quad_corner(rng, pol):
    q = _quad_corner(rng, pol)
    aba, aca = q.a @ q.b @ q.a, q.a @ q.c @ q.a
    if residual(aba, aca, q.a, q.b, q.a) > pol.tol_residual:
        return _skip(q.family, "aba != aca")
    left, right = has_hirano(q.a @ q.c, pol), has_hirano(q.b @ q.a, pol)
    return _Result(q.family, left == right, 0.0, f"has_hirano(ac)={left}, has_hirano(ba)={right}")


def _t_quad_square(rng, pol):
    q = _quad(rng, pol, ("neg-square", "product-equal", "sign-flip"))
    ac, db = q.a @ q.c, q.d @ q.b
    if residual(ac @ ac, db @ db, q.a, q.c, q.a, q.c) > pol.tol_residual:
        return _skip(q.family, "acac != dbdb")
    return _transfer(q, pol)


def _t_cline(rng, pol):
    n = _dim(rng)
    fam = _pick(rng, ("factor", "both-singular"))
    if fam == "factor":
        g, g_inv = _invertible(rng, n)
        a, b = g, g_inv @ _mixed_x(rng, n).a
    else:
        # a = S diag(core, 0) T and b = T^{-1} diag(B1, tail) S^{-1}, both singular when r < n
        r = int(rng.integers(0, n + 1))
        core = np.triu(_random_matrix(rng, r, r), 1) + np.diag(rng.choice([1.0, -1.0, 2.0, 0.5], r))
        b1 = gen_jordan(random_spec(rng, r, HIRANO_EIGS + (2,), 1.0)).j if r else _zeros(0, 0)
        tail = _mixed_x(rng, n - r).j if n - r else _zeros(0, 0)
        xa = block_diag(core, _zeros(n - r, n - r))
        xb = block_diag(b1, tail)
        s, s_inv = _invertible(rng, n)
        t, t_inv = _invertible(rng, n)
        a, b = s @ xa @ t, t_inv @ xb @ s_inv
    _, res = cline.cline_residual(a, b, pol)
    return _Result(fam, res <= pol.tol_residual, res, f"Cline residual {res:.3e}")


def _weak_pair(rng, pol, families=WEAK_PAIR_FAMILIES):
    fam = _pick(rng, families)
    return gen_weak_comm_pair(int(rng.integers(2**63)), _dim(rng), fam, pol)


def _pair_gate(p: additive.PairInstance):
    if not p.weak_comm:
        return _skip(p.family, "pair not weakly commuting")
    if not p.both_hirano:
        return _skip(p.family, "a or b lacks a Hirano inverse")
    return None


def _t_product(rng, pol):
    p = _weak_pair(rng, pol)
    return _pair_gate(p) or _Result(p.family, additive.product_hirano(p, pol), 0.0, "has_hirano(ab)")


def _t_one_way(rng, pol):
    p = _weak_pair(rng, pol, COMMUTING_PAIR_FAMILIES)
    gate = _pair_gate(p)
    if gate:
        return gate
    if not p.full_comm:
        return _skip(p.family, "ab != ba")
    s, t = additive.additive_equiv(p, pol)
    if not t:
        return _skip(p.family, "I + a^d b lacks a Hirano inverse")
    return _Result(p.family, s, 0.0, f"has_hirano(a+b)={s}")


def _equiv(p, pol):
    gate = _pair_gate(p)
    if gate:
        return gate
    s, t = additive.additive_equiv(p, pol)
    return _Result(p.family, s == t, 0.0, f"has_hirano(a+b)={s}, has_hirano(I+a^d b)={t}")


def _t_equiv(rng, pol):
    return _equiv(_weak_pair(rng, pol), pol)


def _t_equiv_commuting(rng, pol):
    p = _weak_pair(rng, pol, COMMUTING_PAIR_FAMILIES)
    if not p.full_comm:
        return _skip(p.family, "ab != ba")
    return _equiv(p, pol)


def _annihilating(rng):
    # a = [[A1, 0], [X, 0]], b = [[0, 0], [Y, B2]] gives ab = 0 with ba != 0
    n = _dim(rng, 2)
    p1, p2 = _split(rng, n)
    a_hat = np.zeros((n, n), dtype=complex)
    b_hat = np.zeros((n, n), dtype=complex)
    a_hat[:p1, :p1] = _base(rng, p1, False).a
    a_hat[p1:, :p1] = _random_matrix(rng, p2, p1)
    b_hat[p1:, :p1] = _random_matrix(rng, p2, p1)
    b_hat[p1:, p1:] = _base(rng, p2, False).a
    s, s_inv = _invertible(rng, n)
    return s @ a_hat @ s_inv, s @ b_hat @ s_inv


def _orthogonal(rng, pol):
    p = gen_weak_comm_pair(int(rng.integers(2**63)), _dim(rng), "orthogonal", pol)
    return p.a, p.b


_JOINT_DIAGONAL = [(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)] + [(t, -t) for t in (1, -1, 2, 0.5, 1j)]


def _t_split(rng, pol):
    fam = _pick(rng, ("joint-diagonal", "annihilating", "negation"))
    if fam == "joint-diagonal":
        n = _dim(rng)
        pairs = [_JOINT_DIAGONAL[int(k)] for k in rng.integers(0, len(_JOINT_DIAGONAL), n)]
        s, s_inv = _invertible(rng, n)
        a = s @ np.diag([complex(l) for l, _ in pairs]) @ s_inv
        b = s @ np.diag([complex(m) for _, m in pairs]) @ s_inv
    elif fam == "annihilating":
        a, b = _annihilating(rng)
    else:
        a = gen_jordan(random_mixed_spec(rng, _dim(rng), _kappa(rng))).a
        b = -a
    try:
        ok = additive.split_sufficient(a, b, pol)
    except PreconditionError as exc:
        return _skip(fam, f"precondition failed: {exc.condition}")
    return _Result(fam, ok, 0.0, "has_hirano(a+b)")


def _t_orthogonal(rng, pol):
    fam = _pick(rng, ("annihilating", "orthogonal"))
    a, b = _annihilating(rng) if fam == "annihilating" else _orthogonal(rng, pol)
    try:
        ok = additive.orthogonal_sum(a, b, pol)
    except PreconditionError as exc:
        return _skip(fam, f"precondition failed: {exc.condition}")
    return _Result(fam, ok, 0.0, "has_hirano(a+b)")


def _hirano_parts(rng, size, core=None):
    """Jordan-form Hirano matrix split into an invertible ``+-1`` core and a nilpotent rest."""
    r = int(rng.integers(0, size + 1)) if core is None else core
    ac = gen_jordan(random_spec(rng, r, (1, -1), 1.0, 2)).j if r else np.zeros((0, 0), dtype=complex)
    an = gen_jordan(random_spec(rng, size - r, (0,), 1.0, 3)).j if size - r else np.zeros((0, 0), dtype=complex)
    return ac, an


def _assemble(rng, a_hat, b_hat, c_hat, d_hat) -> blockmat.Block2x2:
    p, q = a_hat.shape[0], d_hat.shape[0]
    sa, sa_inv = _invertible(rng, p)
    sd, sd_inv = _invertible(rng, q)
    return blockmat.Block2x2(
        sa @ a_hat @ sa_inv, sa @ b_hat @ sd_inv, sd @ c_hat @ sa_inv, sd @ d_hat @ sd_inv
    )


def _block_trial(fam, m, check, pol):
    try:
        ok = check(m, pol)
    except PreconditionError as exc:
        return _skip(fam, f"precondition failed: {exc.condition}")
    return _Result(fam, ok, 0.0, f"p={m.sizes[0]}, q={m.sizes[1]}")


def _t_triangular(rng, pol):
    p, q = _dim(rng, 1, 5), _dim(rng, 1, 5)
    a = _base(rng, p, False).a
    d = _base(rng, q, False).a
    m = blockmat.Block2x2(a, 3 * _random_matrix(rng, p, q), np.zeros((q, p)), d)
    return _block_trial("upper-triangular", m, blockmat.triangular_hirano, pol)


def _t_corner(rng, pol):
    spec = random_spec(rng, _dim(rng), cond_bound=_kappa(rng))
    inst = gen_jordan(spec)
    e = inst.lift(np.diag(_block_selector(rng, spec)))
    try:
        ok = corner_hirano(e, inst.a, pol)
    except PreconditionError as exc:
        return _skip("block-selector", f"precondition failed: {exc.condition}")
    return _Result("block-selector", ok, 0.0, "has_hirano(ea)")


def _zeros(r, c):
    return np.zeros((r, c), dtype=complex)


def _t_cross(rng, pol):
    p, q = _dim(rng, 1, 5), _dim(rng, 1, 5)
    ac, an = _hirano_parts(rng, p)
    dc, dn = _hirano_parts(rng, q)
    ra, rd = ac.shape[0], dc.shape[0]
    b_hat = _zeros(p, q)
    c_hat = _zeros(q, p)
    # B links A's core to D's nilpotent part; C links D's core to A's nilpotent part
    b_hat[:ra, rd:] = _random_matrix(rng, ra, q - rd)
    c_hat[:rd, ra:] = _random_matrix(rng, rd, p - ra)
    m = _assemble(rng, block_diag(ac, an), b_hat, c_hat, block_diag(dc, dn))
    return _block_trial("core-to-nilpotent", m, blockmat.cross_split_hirano, pol)


def _t_aligned(rng, pol):
    fam = _pick(rng, ("core-core", "intertwined-core"))
    p, q = _dim(rng, 1, 5), _dim(rng, 1, 5)
    if fam == "core-core":
        ac, an = _hirano_parts(rng, p)
        dc, dn = _hirano_parts(rng, q)
        ra, rd = ac.shape[0], dc.shape[0]
        b_hat = _zeros(p, q)
        c_hat = _zeros(q, p)
        b_hat[:ra, :rd] = _random_matrix(rng, ra, rd)
        c_hat[rd:, ra:] = _random_matrix(rng, q - rd, p - ra)
        d_hat = block_diag(dc, dn)
    else:
        r = int(rng.integers(1, min(p, q) + 1))
        ac, an = _hirano_parts(rng, p, core=r)
        _, dn = _hirano_parts(rng, q, core=r)
        rr, rr_inv = _invertible(rng, r)
        dc = rr @ ac @ rr_inv
        coef = _random_matrix(rng, 1, 3)[0]
        poly = coef[0] * np.eye(r) + coef[1] * ac + coef[2] * ac @ ac
        b_hat = _zeros(p, q)
        c_hat = _zeros(q, p)
        # C_cc A_c = D_c C_cc because C_cc = R poly(A_c) and D_c = R A_c R^{-1}
        c_hat[:r, :r] = rr @ poly
        c_hat[r:, r:] = _random_matrix(rng, q - r, p - r)
        d_hat = block_diag(dc, dn)
    m = _assemble(rng, block_diag(ac, an), b_hat, c_hat, d_hat)
    return _block_trial(fam, m, blockmat.aligned_split_hirano, pol)


def _t_schur(rng, pol):
    p, q = _dim(rng, 1, 5), _dim(rng, 1, 5)
    r = int(rng.integers(1, p + 1))
    ac, nil = _hirano_parts(rng, p, core=r)
    bc = _random_matrix(rng, r, q)
    if q >= r:
        h = gen_jordan(random_spec(rng, r, HIRANO_EIGS, _kappa(rng), 2)).a
        # B_c C_c = (H - A_c) A_c puts A W = diag(H, 0)
        cc = np.linalg.pinv(bc) @ (h - ac) @ ac
        fam = "schur-core"
    else:
        cc = _zeros(q, r)
        fam = "schur-wide"
    bc_proj = np.eye(q) - np.linalg.pinv(bc) @ bc
    cn = bc_proj @ _random_matrix(rng, q, p - r) if rng.random() < 0.5 else _zeros(q, p - r)
    c_hat = np.hstack([cc, cn])
    if p - r:
        ker_n = np.eye(p - r) - np.linalg.pinv(nil) @ nil
        coker_c = np.eye(q) - c_hat @ np.linalg.pinv(c_hat, rcond=1e-10)
        bn = ker_n @ _random_matrix(rng, p - r, q) @ coker_c
    else:
        bn = _zeros(0, q)
    b_hat = np.vstack([bc, bn])
    d_hat = cc @ np.linalg.inv(ac) @ bc
    m = _assemble(rng, block_diag(ac, nil), b_hat, c_hat, d_hat)
    return _block_trial(fam, m, blockmat.schur_hirano, pol)


_TRIALS: dict[str, Callable] = {
    "L2.1": _t_nil_closure,
    "T2.4": _t_cubic,
    "C2.5": _t_power,
    "L2.6": _t_halves,
    "T2.7": _t_tripotent,
    "C2.8": _t_spectrum,
    "P2.9": _t_formula,
    "L3.1": _t_quad_qnil,
    "T3.3": _t_quad_hirano,
    "C3.4": _t_quad_strong,
    "C3.5": _t_quad_corner,
    "C3.6": _t_quad_square,
    "L4.1": _t_product,
    "L4.2": _t_one_way,
    "T4.3": _t_equiv,
    "C4.4": _t_equiv_commuting,
    "P4.5": _t_split,
    "C4.6": _t_orthogonal,
    "L5.1": _t_triangular,
    "L5.2": _t_corner,
    "T5.3": _t_cross,
    "P5.4": _t_aligned,
    "T5.5": _t_schur,
    "Cline": _t_cline,
}
THEOREMS = tuple(_TRIALS)


def trial_seed(theorem: str, index: int, seed: int) -> int:
    ss = np.random.SeedSequence([seed, index, zlib.crc32(theorem.encode())])
    return int(ss.generate_state(1, np.uint64)[0])


def run_trial(theorem: str, tseed: int, pol: NumericPolicy = DEFAULT_POLICY) -> TrialOutcome:
    rng = np.random.default_rng(tseed)
    try:
        r = _TRIALS[theorem](rng, pol)
    except PreconditionError as exc:
        r = _skip("unknown", f"precondition failed: {exc.condition}")
    except HiranoError as exc:
        r = _Result("unknown", False, float("nan"), f"{type(exc).__name__}: {exc}")
    resid = float(r.residual)
    return TrialOutcome(tseed, r.family, r.met, r.ok if r.met else True, resid, r.detail)


def run_trials(
    theorem: str, count: int, seed: int, pol: NumericPolicy = DEFAULT_POLICY
) -> list[TrialOutcome]:
    """Run ``count`` trials of ``theorem``; deterministic in ``(theorem, count, seed, pol)``.

    Trial ``i`` draws from its own seed derived from ``(seed, i, theorem)``, so
    outcomes do not depend on how many trials precede it.
    """
    if theorem not in _TRIALS:
        raise ValueError(f"unknown theorem label {theorem!r}; expected one of {', '.join(THEOREMS)}")
    if isinstance(count, bool) or int(count) != count or count < 0:
        raise ValueError(f"count must be a nonnegative integer, got {count!r}")
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return [run_trial(theorem, trial_seed(theorem, i, int(seed)), pol) for i in range(int(count))]


def summarize(outcomes: Sequence[TrialOutcome]) -> dict:
    """Counts of met/skipped/failed trials, per family, with never-met families flagged."""
    families: dict[str, dict[str, int]] = {}
    for o in outcomes:
        f = families.setdefault(o.family, {"trials": 0, "met": 0, "failed": 0})
        f["trials"] += 1
        f["met"] += o.hypotheses_met
        f["failed"] += not o.conclusion_ok
    met = sum(o.hypotheses_met for o in outcomes)
    failed = sum(not o.conclusion_ok for o in outcomes)
    resids = [o.residual_max for o in outcomes if o.hypotheses_met]
    return {
        "trials": len(outcomes),
        "met": met,
        "skipped": len(outcomes) - met,
        "failed": failed,
        "skip_rate": (len(outcomes) - met) / len(outcomes) if outcomes else 0.0,
        "residual_max": max(resids) if resids else 0.0,
        "families": {k: families[k] for k in sorted(families)},
        "generator_bugs": sorted(k for k, v in families.items() if v["met"] == 0),
    }
