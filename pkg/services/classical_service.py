"""Generation recipes for classical algebras: regular elements, root automorphisms, partners."""

from math import factorial
from typing import Callable, Hashable, Optional

import numpy as np

from builders.classical_builder import ClassicalAlgebra, center_quotient
from config.logging_config import get_logger
from config.settings import settings
from core.field import FieldArray, codes, enumerate_field, random_elements
from core.liealg import LieAlgebra, center, generated_subalgebra
from core.linalg import mat_pow, rank, solve
from utils.exceptions import (
    FieldTooLargeForEnumeration,
    FieldTooSmall,
    InvariantViolation,
    NilpotencyIndexTooLarge,
    NoPartnerInField,
    PreconditionError,
    SearchBudgetExhausted,
)
from utils.helpers import trial_rng

logger = get_logger(__name__)

PartnerSolver = Callable[[ClassicalAlgebra, FieldArray], FieldArray]


def _distinct(values: FieldArray) -> bool:
    flat = codes(values)
    return len(np.unique(flat)) == flat.size


def is_dense(g: ClassicalAlgebra, x: FieldArray) -> bool:
    """Every root component of x is non-zero."""
    return bool(np.all(codes(g.root_components(x)) != 0))


def is_regular(g: ClassicalAlgebra, y: FieldArray) -> bool:
    """y lies in the Cartan subalgebra and its root values are pairwise distinct."""
    return g.cartan.contains(y) and _distinct(g.root_values(y))


def vandermonde_rank(g: ClassicalAlgebra, x: FieldArray, y: FieldArray) -> int:
    """Rank of the root components of (ad y)^k x, k = 0 .. |roots|."""
    ad_y = g.base.ad(y)
    rows = []
    current = x
    for _ in range(len(g.roots) + 1):
        rows.append(g.root_components(current))
        current = ad_y @ current
    return rank(g.base.field(np.stack([codes(r) for r in rows])))


class ClassicalService:
    """Service for the classical generation recipes."""

    def __init__(self, budget: Optional[int] = None, seed: Optional[int] = None) -> None:
        """
        Initialize classical service.

        Args:
            budget: Random draws per search (defaults to the configured budget)
            seed: Seed of the random streams
        """
        self.budget = budget if budget is not None else settings.search_budget
        self.seed = seed
        self._stream = 0

    def _rng(self) -> np.random.Generator:
        self._stream += 1
        return trial_rng(self.seed, self._stream)

    # Regular elements

    def regular_cartan_element(self, g: ClassicalAlgebra, rng: Optional[np.random.Generator] = None) -> FieldArray:
        """
        An element y of the Cartan subalgebra with pairwise distinct root values.

        Random draws come first, then a backtracking search over the coordinates of y
        on the Cartan basis when the field is enumerable.

        Raises:
            FieldTooSmall: If the field holds no regular element
            SearchBudgetExhausted: If the backtracking search hits its node budget
        """
        rng = rng or self._rng()
        V = g.root_functionals()
        cartan = g.cartan.rows
        r = cartan.shape[0]
        for _ in range(self.budget):
            c = random_elements(g.spec, r, rng)
            if _distinct(V @ c):
                return c @ cartan

        try:
            points = enumerate_field(g.spec, settings.exhaustive_bound)
        except FieldTooLargeForEnumeration as e:
            raise FieldTooSmall(f"no regular element in {self.budget} draws over {g.spec.label}") from e
        c = self._backtrack(V, points)
        if c is None:
            raise FieldTooSmall(f"{g.spec.label} holds no regular element of {g.descriptor}")
        logger.debug(f"Regular element of {g.descriptor} found by backtracking over {g.spec.label}")
        return c @ cartan

    def _backtrack(self, V: FieldArray, points: FieldArray) -> Optional[FieldArray]:
        """Assign coordinates one at a time, pruning on roots supported on the assigned ones."""
        field = type(V)
        r = V.shape[1]
        settled_at = np.array(
            [max([i for i in range(r) if codes(V[a, i]) != 0] or [0]) for a in range(V.shape[0])]
        )
        c = field.Zeros(r)
        nodes = 0
        limit = settings.exhaustive_bound * max(r, 1)

        def extend(i: int) -> bool:
            nonlocal nodes
            if i == r:
                return True
            done = np.flatnonzero(settled_at <= i)
            for value in points:
                nodes += 1
                if nodes > limit:
                    raise SearchBudgetExhausted("backtracking node budget exhausted")
                c[i] = value
                if _distinct(V[done] @ c):
                    if extend(i + 1):
                        return True
            c[i] = 0
            return False

        return c.copy() if extend(0) else None

    # Root automorphisms

    def exp_ad_automorphism(
        self, g: ClassicalAlgebra, root: Hashable, t: FieldArray, verify: bool = True
    ) -> FieldArray:
        """
        exp(t ad e_root) = sum_{k < p} t^k (ad e_root)^k / k!.

        Raises:
            NilpotencyIndexTooLarge: If (ad e_root)^p != 0
        """
        E = g.base.ad(g.root_vector(root))
        p = g.spec.p
        if np.any(codes(mat_pow(E, p))):
            raise NilpotencyIndexTooLarge(f"ad e_{root} is not nilpotent of index <= {p}")
        field = g.base.field
        sigma = field.Identity(g.dim)
        power = field.Identity(g.dim)
        scale = field(1)
        for k in range(1, p):
            power = power @ E
            if not np.any(codes(power)):
                break
            scale = scale * t
            sigma = sigma + scale * field(factorial(k) % p) ** -1 * power
        if verify and not self.is_automorphism(g.base, sigma):
            raise InvariantViolation(f"exp ad e_{root} does not preserve brackets")
        return sigma

    @staticmethod
    def is_automorphism(L: LieAlgebra, sigma: FieldArray) -> bool:
        """sigma [a, b] = [sigma a, sigma b] on all basis pairs."""
        for a in range(L.dim):
            if np.any(codes(sigma @ L.ad_basis(a) - L.ad(sigma[:, a]) @ sigma)):
                return False
        return True

    @staticmethod
    def _apply_exp(E: FieldArray, t: FieldArray, v: FieldArray, p: int) -> FieldArray:
        field = type(v)
        result = v.copy()
        term = v
        for k in range(1, p):
            term = E @ term
            if not np.any(codes(term)):
                break
            result = result + t**k * field(factorial(k) % p) ** -1 * term
        return result

    def densify_components(
        self, g: ClassicalAlgebra, x: FieldArray, rng: Optional[np.random.Generator] = None
    ) -> tuple[FieldArray, FieldArray]:
        """
        Move x by root automorphisms until every root component is non-zero.

        Returns:
            (sigma(x), sigma)

        Raises:
            SearchBudgetExhausted: If no draw densifies x; a larger field may help
        """
        if not np.any(codes(x)):
            raise PreconditionError("densify needs x != 0")
        field = g.base.field
        if is_dense(g, x):
            return x.copy(), field.Identity(g.dim)
        rng = rng or self._rng()
        adjoints = {root: g.base.ad(g.root_vector(root)) for root in g.roots}
        roots = list(g.roots)
        for _ in range(self.budget):
            order = [roots[i] for i in rng.permutation(len(roots))]
            ts = random_elements(g.spec, len(order), rng)
            v = x
            for root, t in zip(order, ts):
                v = self._apply_exp(adjoints[root], t, v, g.spec.p)
            if is_dense(g, v):
                sigma = field.Identity(g.dim)
                for root, t in zip(order, ts):
                    sigma = self.exp_ad_automorphism(g, root, t, verify=False) @ sigma
                if np.any(codes(sigma @ x - v)):
                    raise InvariantViolation("automorphism product disagrees with its action")
                return v, sigma
        raise SearchBudgetExhausted(
            f"no densifying automorphism in {self.budget} draws over {g.spec.label}; try an extension"
        )

    # Partners

    def theoremB_partner(
        self, g: ClassicalAlgebra, x: FieldArray, rng: Optional[np.random.Generator] = None
    ) -> tuple[FieldArray, dict]:
        """
        A partner y with F<x, y> = g.

        x is densified to sigma(x), a regular y' of the Cartan subalgebra is chosen,
        and y = sigma^{-1}(y') is certified against the original x.

        Returns:
            (y, details) where details holds sigma(x), y' and the module rounds

        Raises:
            FieldTooSmall: If the field holds no regular element
            SearchBudgetExhausted: If no trial certifies
        """
        if not np.any(codes(x)):
            raise PreconditionError("a partner needs x != 0")
        if g.kind in ("gl", "direct-sum") and center(g.base).contains(x):
            raise PreconditionError("x is central")
        rng = rng or self._rng()
        for trial in range(self.budget):
            dense, sigma = self.densify_components(g, x, rng)
            y_prime = self.regular_cartan_element(g, rng)
            closure = generated_subalgebra(g.base, dense, y_prime)
            if closure.dim != g.dim:
                continue
            y = solve(sigma, y_prime)
            if y is None:
                raise InvariantViolation("root automorphism product is singular")
            check = generated_subalgebra(g.base, x, y)
            if check.dim != g.dim:
                raise InvariantViolation("pulled-back partner does not generate")
            details = {
                "dense_x": dense,
                "y_regular": y_prime,
                "trial": trial,
                "module_rounds": check.steps,
                "vandermonde_rank": vandermonde_rank(g, dense, y_prime),
            }
            return y, details
        raise SearchBudgetExhausted(f"no certified partner in {self.budget} trials over {g.spec.label}")

    def central_extension_partner(
        self,
        g: ClassicalAlgebra,
        x: FieldArray,
        solver: Optional[PartnerSolver] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> tuple[FieldArray, dict]:
        """
        Partner in an algebra with one-dimensional center z.

        A partner y_0 of the image of x in g/z is lifted and y_alpha = y_0 + alpha z is
        scanned over the field.

        Args:
            g: Algebra with one-dimensional center, e.g. gl_n
            x: Non-central element
            solver: Partner finder on the quotient; regular Cartan partner by default
            rng: Random stream

        Raises:
            NoPartnerInField: If no alpha in the field works
        """
        z = center(g.base)
        if z.dim != 1:
            raise PreconditionError(f"center of dimension {z.dim}, expected 1")
        if z.contains(x):
            raise PreconditionError("x is central")
        rng = rng or self._rng()
        q = center_quotient(g, "pgl" if g.kind == "gl" else g.kind, f"{g.base.name}/z")
        keep = q.base.parent_indices or []
        x_bar = z.residual(x)[keep]
        if solver is None:
            y_bar, _ = self.theoremB_partner(q, x_bar, rng)
        else:
            y_bar = solver(q, x_bar)
        y0 = g.base.zero()
        y0[keep] = y_bar
        central = z.rows[0]
        for alpha in enumerate_field(g.spec, settings.exhaustive_bound):
            y = y0 + alpha * central
            closure = generated_subalgebra(g.base, x, y)
            if closure.dim == g.dim:
                return y, {"y0": y0, "alpha": alpha, "module_rounds": closure.steps}
        raise NoPartnerInField(f"no y_0 + alpha z generates with x over {g.spec.label}; try an extension")

