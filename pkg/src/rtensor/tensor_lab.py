"""Random tensors: sampling, invariant evaluation and Monte Carlo estimates."""

from __future__ import annotations

import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .graph_core import inverse

DISTRIBUTIONS = ("complex-gaussian", "uniform-phase", "scaled-complex-uniform")
MAX_INTERMEDIATE = 2 ** 26


@dataclass
class DenseTensor:
    data: np.ndarray

    @property
    def N(self):
        return self.data.shape[0]

    @property
    def D(self):
        return self.data.ndim


def _array(T):
    return T.data if isinstance(T, DenseTensor) else np.asarray(T)


def evaluate_invariant(B, T, max_elems=MAX_INTERMEDIATE):
    """Contract k copies of T and k of conj(T) along the wiring of B.

    Pairs of operands are merged greedily, always choosing the merge with
    the smallest result (ties go to the pair sharing more indices).
    """
    arr = _array(T)
    D = arr.ndim
    if D != B.colors:
        raise ValueError(f"rank {D} does not match {B.colors}-colored invariant")
    N = arr.shape[0]
    k = B.k
    conj = np.conj(arr)
    ops = [(arr, [c * k + w for c in range(D)]) for w in range(k)]
    invs = [inverse(r) for r in B.wiring]
    ops += [(conj, [c * k + invs[c][b] for c in range(D)]) for b in range(k)]
    letters = {}

    def sym(lab):
        if lab not in letters:
            letters[lab] = string.ascii_letters[len(letters)]
        return letters[lab]

    while len(ops) > 1:
        best = None
        for i in range(len(ops)):
            li = set(ops[i][1])
            for j in range(i + 1, len(ops)):
                lj = set(ops[j][1])
                shared = li & lj
                size = N ** len(li ^ lj)
                key = (size, -len(shared))
                if best is None or key < best[0]:
                    best = (key, i, j, shared)
        (size, _), i, j, shared = best
        if size > max_elems:
            raise MemoryError(f"intermediate of {size} entries exceeds guard {max_elems}")
        (a, la), (b, lb) = ops[i], ops[j]
        out = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
        spec = "".join(map(sym, la)) + "," + "".join(map(sym, lb)) + "->" + "".join(map(sym, out))
        merged = (np.einsum(spec, a, b), out)
        ops = [op for n, op in enumerate(ops) if n not in (i, j)] + [merged]
    return complex(ops[0][0])


def quartic_matrix_form(T, color=0):
    """tr[(A A^dagger)^2] with A the flattening that isolates one index slot."""
    arr = np.moveaxis(_array(T), color, 0)
    A = arr.reshape(arr.shape[0], -1)
    M = A @ A.conj().T
    return complex(np.trace(M @ M))


def draw_atoms(dist, size, rng):
    """Atomic laws with zero mean, E|t|^2 = 1 and E[t^a conj(t)^b] = 0 for a != b."""
    if dist == "complex-gaussian":
        return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)
    if dist == "uniform-phase":
        return np.exp(2j * np.pi * rng.random(size))
    if dist == "scaled-complex-uniform":
        # uniform on the disk of radius sqrt(2)
        r = np.sqrt(2.0 * rng.random(size))
        return r * np.exp(2j * np.pi * rng.random(size))
    raise ValueError(f"unknown distribution {dist!r}; choose from {DISTRIBUTIONS}")


def sample_iid(dist, N, D, seed):
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    atoms = draw_atoms(dist, (N,) * D, rng)
    return DenseTensor(atoms * N ** (-(D - 1) / 2))


def jackknife(series, block_size=1, func=None):
    """Blocked jackknife estimate and error of func(mean of each row).

    series has shape (n,) or (m, n); trailing samples that do not fill a
    block are dropped.
    """
    x = np.asarray(series)
    one_row = x.ndim == 1
    x = np.atleast_2d(x)
    nb = x.shape[1] // block_size
    if nb < 2:
        raise ValueError("need at least two blocks")
    blocks = x[:, :nb * block_size].reshape(x.shape[0], nb, block_size).mean(axis=2)
    total = blocks.mean(axis=1)
    loo = (total[:, None] * nb - blocks) / (nb - 1)
    if func is None:
        func = (lambda m: m[0]) if one_row else (lambda m: m)
    est = func(total)
    reps = np.array([func(loo[:, i]) for i in range(nb)])
    err = np.sqrt((nb - 1) / nb * np.sum(np.abs(reps - reps.mean(axis=0)) ** 2, axis=0))
    return est, float(err) if np.ndim(err) == 0 else err


@dataclass
class EstimatorResult:
    mean: complex
    stderr: float
    samples: int
    seed: int
    method: str
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        m = complex(self.mean)
        return {"mean": m.real, "mean_imag": m.imag, "stderr": self.stderr,
                "samples": self.samples, "seed": self.seed, "method": self.method,
                **self.meta}


def stream_seeds(seed, streams):
    """Independent child seeds: SeedSequence(seed).spawn(streams)."""
    return np.random.SeedSequence(seed).spawn(streams)


def _iid_values(B, dist, N, count, seq):
    rng = np.random.default_rng(seq)
    return [evaluate_invariant(B, sample_iid(dist, N, B.colors, rng)) for _ in range(count)]


def estimate_iid_moment(B, dist, N, samples, seed, streams=8, threads=1):
    """Mean of Tr_B over independent samples, with a jackknife error.

    Work is split over a fixed number of seeded streams, so the result does
    not depend on the thread count.
    """
    seqs = stream_seeds(seed, streams)
    counts = [samples // streams + (s < samples % streams) for s in range(streams)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda a: _iid_values(B, dist, N, *a), zip(counts, seqs)))
    values = np.array([v for part in parts for v in part])
    mean, err = jackknife(values)
    return EstimatorResult(complex(mean), err, samples, seed, "iid",
                           {"distribution": dist, "N": N, "D": B.colors, "streams": streams})


# -- quartic Metropolis -----------------------------------------------------

class QuarticChain:
    """Metropolis chain for exp(-N^(D-1) (|T|^2 + lam tr (A A^dagger)^2)).

    A is the N x N^(D-1) flattening along the first index.  Random numbers
    come from a numpy Generator in chunks, so the compiled and the plain
    kernels walk the same chain.
    """

    def __init__(self, N, D=3, lam=0.0, seed=0, step=None, chunk=100):
        if lam < 0:
            raise ValueError("lambda must be >= 0")
        self.N, self.D, self.lam = N, D, float(lam)
        self.P = N ** (D - 1)
        self.scale = float(N ** (D - 1))
        self.rng = np.random.default_rng(seed)
        self.chunk = chunk
        T = sample_iid("complex-gaussian", N, D, self.rng).data
        self.A = np.ascontiguousarray(T.reshape(N, self.P))
        self.step = step if step is not None else 1.5 * N ** (-(D - 1) / 2)
        self.accepted = 0
        self.proposed = 0

    def _run(self, n):
        M = self.A @ self.A.conj().T
        trm = float(np.trace(M).real)
        trm2 = float(np.sum(np.abs(M) ** 2))
        normals = self.rng.standard_normal((n, self.N * self.P, 2))
        uniforms = self.rng.random((n, self.N * self.P))
        out1 = np.empty(n)
        out2 = np.empty(n)
        acc, trm, trm2 = _accel.metropolis_sweeps(self.A, M, normals, uniforms, self.step,
                                                  self.lam, self.scale, trm, trm2, out1, out2)
        if not (np.isfinite(trm) and np.isfinite(trm2)):
            raise FloatingPointError("action diverged")
        return acc, out1, out2

    def burn(self, sweeps, tune=True):
        done = 0
        while done < sweeps:
            n = min(self.chunk, sweeps - done)
            acc, _, _ = self._run(n)
            rate = acc / (n * self.N * self.P)
            if tune:
                if rate < 0.3:
                    self.step *= 0.8
                elif rate > 0.6:
                    self.step *= 1.25
            done += n

    def sample(self, sweeps, thin=1):
        """Run sweeps and return tr M and tr M^2 recorded every thin sweeps."""
        t1, t2 = [], []
        done = 0
        while done < sweeps:
            n = min(self.chunk, sweeps - done)
            acc, o1, o2 = self._run(n)
            self.accepted += acc
            self.proposed += n * self.N * self.P
            t1.append(o1)
            t2.append(o2)
            done += n
        t1 = np.concatenate(t1)[thin - 1::thin]
        t2 = np.concatenate(t2)[thin - 1::thin]
        return t1, t2

    @property
    def acceptance(self):
        return self.accepted / self.proposed if self.proposed else float("nan")


@dataclass
class QuarticResult:
    dipole: EstimatorResult  # N^-1 <Tr_dipole>
    quartic: EstimatorResult  # N^-1 <Tr_B4>
    ratio: EstimatorResult  # (<Tr_B4>/N) / (<Tr_dipole>/N)^2
    acceptance: float
    step: float

    def to_dict(self):
        return {"dipole_over_N": self.dipole.to_dict(), "quartic_over_N": self.quartic.to_dict(),
                "gaussianity_ratio": self.ratio.to_dict(),
                "acceptance": self.acceptance, "step": self.step}


def mcmc_quartic(N, D=3, lam=0.05, sweeps=200_000, burnin=20_000, thin=1, seed=42,
                 block=100, step=None):
    chain = QuarticChain(N, D, lam, seed, step)
    chain.burn(burnin)
    t1, t2 = chain.sample(sweeps, thin)
    meta = {"N": N, "D": D, "lambda": lam, "burnin": burnin, "thin": thin,
            "block": block, "acceptance": chain.acceptance, "step": chain.step}
    m1, e1 = jackknife(t1 / N, block)
    m2, e2 = jackknife(t2 / N, block)
    mr, er = jackknife(np.vstack([t1 / N, t2 / N]), block, lambda m: m[1] / m[0] ** 2)
    n = len(t1)
    return QuarticResult(
        EstimatorResult(float(m1), e1, n, seed, "mcmc", {**meta, "observable": "Tr_dipole/N"}),
        EstimatorResult(float(m2), e2, n, seed, "mcmc", {**meta, "observable": "Tr_B4/N"}),
        EstimatorResult(float(mr), er, n, seed, "mcmc", {**meta, "observable": "gaussianity_ratio"}),
        chain.acceptance, chain.step)
