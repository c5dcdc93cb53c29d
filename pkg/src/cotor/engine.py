"""Session object: one sign convention, shared caches, derived data.

Everything downstream of the differential (matrices, ranks, cohomology
dimensions, class solvers) is memoized here; all cached values are
immutable after construction, so read access from parallel workers is
safe.  The degree cap only bounds what the *matrix-backed* operations may
touch; identity checks by direct evaluation are uncapped.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cohomology
from .cache import ENGINE_VERSION, MatrixCache, fingerprint
from .cohomology import CotorBasis, additive_basis_classes, class_element
from .derivation import build_named_generators, named_evaluator
from .dga import DegreeBasis, Element, element_vector, enumerate_basis
from .differential import AuditReport, Differential, audit_conventions
from .gf3 import GF3Solver, SparseMatrixF3

DEFAULT_MAX_DEGREE = 80


@dataclass(frozen=True)
class ClassDecomposition:
    degree: int
    coefficients: dict          # class label -> coefficient in {1, 2}
    witness: Element            # input - sum(c_i * rep_i) = d(witness)

    def is_zero_class(self) -> bool:
        return not self.coefficients


class Engine:
    def __init__(self, max_degree: int = DEFAULT_MAX_DEGREE,
                 convention: str = "audit", cache_dir=None, jobs: int = 1,
                 audit_kwargs: dict | None = None):
        self.max_degree = max_degree
        self.jobs = max(1, jobs)
        self.audit_report: AuditReport | None = None
        if convention == "audit":
            # selection audit: small bounds suffice to reject the bad rules;
            # the full-depth audit is its own verification surface
            self.audit_report = audit_conventions(
                **(audit_kwargs or {"degree_bound": 12, "pair_samples": 60}))
            convention = self.audit_report.selected
        self.convention = convention
        self.d = Differential(convention)
        self.fingerprint = fingerprint(convention)
        self.cache = MatrixCache(cache_dir, convention) if cache_dir else None
        self._bases: dict[int, DegreeBasis] = {}
        self._matrices: dict[int, SparseMatrixF3] = {}
        self._dense: dict[int, np.ndarray] = {}
        self._ranks: dict[int, int] = {}
        self._named = None
        self._named_ev = None
        self._class_columns: dict[int, tuple] = {}
        self._decompose_solvers: dict[int, GF3Solver] = {}
        self._split_solvers: dict[int, object] = {}

    # -- bases and matrices -------------------------------------------------

    def basis(self, n: int) -> DegreeBasis:
        if n < 0:
            return DegreeBasis(n, (), {})
        b = self._bases.get(n)
        if b is None:
            b = self._bases[n] = enumerate_basis(n)
        return b

    def d_matrix(self, n: int) -> SparseMatrixF3:
        m = self._matrices.get(n)
        if m is not None:
            return m
        if self.cache is not None:
            m = self.cache.load(n)
            if m is not None and (m.n_rows, m.n_cols) != (
                    len(self.basis(n + 1)), len(self.basis(n))):
                m = None        # wrong shape: treat as corrupt, rebuild
            if m is not None:
                self._matrices[n] = m
                return m
        m = self.d.matrix(n, self.basis(n), self.basis(n + 1))
        self._matrices[n] = m
        if self.cache is not None:
            self.cache.store(n, m)
        return m

    def d_dense(self, n: int) -> np.ndarray:
        a = self._dense.get(n)
        if a is None:
            a = self._dense[n] = self.d_matrix(n).to_dense()
        return a

    def build_range(self, n_max: int):
        """Materialize matrices for all degrees <= n_max (optionally parallel)."""
        degrees = [n for n in range(n_max + 1) if n not in self._matrices]
        if self.jobs > 1 and len(degrees) > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                list(pool.map(self.d_matrix, degrees))
        else:
            for n in degrees:
                self.d_matrix(n)

    def rank(self, n: int) -> int:
        if n < 0:
            return 0
        r = self._ranks.get(n)
        if r is None:
            from .gf3 import PrefixRankTable
            r = self._ranks[n] = PrefixRankTable.of(self.d_dense(n)).rank()
        return r

    # -- cohomology ----------------------------------------------------------

    def dim_h(self, n: int) -> int:
        dim_v = len(self.basis(n))
        return dim_v - self.rank(n) - self.rank(n - 1)

    def homology_dims(self, n_max: int) -> list:
        return [self.dim_h(n) for n in range(n_max + 1)]

    def series_coeffs(self, n_max: int) -> list:
        return cohomology.poincare_coeffs(n_max)

    # -- named generators and additive basis ----------------------------------

    @property
    def named(self) -> dict:
        if self._named is None:
            self._named = build_named_generators(self.d)
        return self._named

    @property
    def named_evaluator(self):
        if self._named_ev is None:
            self._named_ev = named_evaluator(self.d)
        return self._named_ev

    def additive_basis(self, n: int) -> CotorBasis:
        return additive_basis_classes(n)

    def class_columns(self, n: int):
        """(classes, matrix of their representative vectors) at degree n."""
        cols = self._class_columns.get(n)
        if cols is None:
            basis = self.basis(n)
            classes = self.additive_basis(n).classes
            mat = np.zeros((len(basis), len(classes)), dtype=np.uint8)
            for j, cls in enumerate(classes):
                rep = class_element(cls, self.named)
                if rep.degree() not in (None, n):
                    raise RuntimeError(f"class {cls.label} has wrong degree")
                mat[:, j] = element_vector(rep, basis)
            cols = self._class_columns[n] = (classes, mat)
        return cols

    def check_additive_basis(self, n: int) -> bool:
        """Count == dim H^n and representatives independent mod im(d)."""
        classes, mat = self.class_columns(n)
        if len(classes) != self.dim_h(n):
            return False
        combined = np.concatenate([mat, self.d_dense(n - 1)], axis=1) \
            if n >= 1 else mat
        from .gf3 import PrefixRankTable
        rank = PrefixRankTable.of(combined).rank()
        return rank == len(classes) + self.rank(n - 1)

    def decompose(self, z: Element, n: int | None = None) -> ClassDecomposition:
        """Write a cocycle as basis classes plus an explicit coboundary."""
        if n is None:
            n = z.degree() or 0
        if not self.d(z).is_zero():
            raise ValueError("decompose: input is not a cocycle")
        solver = self._decompose_solvers.get(n)
        classes, mat = self.class_columns(n)
        if solver is None:
            a = np.concatenate([mat, self.d_dense(n - 1)], axis=1) \
                if n >= 1 else mat
            solver = self._decompose_solvers[n] = GF3Solver(a)
        v = element_vector(z, self.basis(n))
        res = solver.solve(v)
        if res.solution is None:
            raise RuntimeError(
                f"cocycle of degree {n} not spanned by classes + im(d); "
                "additive basis is incomplete here")
        k = len(classes)
        coeffs = {classes[j].label: int(res.solution[j])
                  for j in range(k) if res.solution[j]}
        witness = Element.zero()
        if n >= 1:
            bprev = self.basis(n - 1)
            for j in range(k, len(res.solution)):
                c = int(res.solution[j])
                if c:
                    witness = witness + Element.monomial(
                        bprev.monomials[j - k], c)
        # reconstruction identity, checked on every call
        recon = Element.zero()
        for j in range(k):
            c = int(res.solution[j])
            if c:
                recon = recon + class_element(classes[j], self.named).scaled(c)
        assert z - recon == self.d(witness)
        return ClassDecomposition(n, coeffs, witness)

    # -- misc -----------------------------------------------------------------

    def config(self) -> dict:
        return {
            "engine_version": ENGINE_VERSION,
            "convention": self.convention,
            "fingerprint": self.fingerprint,
            "max_degree": self.max_degree,
            "jobs": self.jobs,
        }
