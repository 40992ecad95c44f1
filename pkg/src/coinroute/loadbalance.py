"""Threshold-router analysis: cost bounds for windowed load balancing.

A lone source routes one packet per step down link A or B. S(t) counts the
A-choices in the previous W steps; a threshold rule plays A iff S(t) <= k.
Sending via A costs C_A(S(t)/W), via B costs C_B(1 - S(t)/W). Balancing the
two frozen costs is itself a threshold rule, with k solving
C_A(k/W) = C_B(1 - k/W); the bounds below show that threshold need not be
the best one.
"""

from dataclasses import dataclass

from .netmodel import CostSpec


class BoundsError(ValueError):
    """Raised when the threshold analysis preconditions fail."""


GOLDEN = (5 ** 0.5 - 1) / 2


def _check_k(W, k):
    if not 1 < k < W - 1:
        raise BoundsError(f"threshold k={k} outside (1, {W - 1})")


def _check_W(W):
    if W <= 4:
        raise BoundsError(f"window W={W} leaves no room for thresholds in (1, W-1)")


@dataclass
class ThresholdModel:
    """One threshold router: the two link cost curves, window, and threshold."""

    cost_a: CostSpec
    cost_b: CostSpec
    W: int
    k: float

    def __post_init__(self):
        _check_W(self.W)
        _check_k(self.W, self.k)


@dataclass
class BoundsReport:
    """Balanced threshold vs the bound-minimizing one, and whether they differ.

    suboptimal means the balanced rule's cost floor sits above the cost
    ceiling available at the alternative threshold, so balancing the frozen
    link costs provably loses to some other threshold.
    """

    W: int
    k_lb: float
    k_prime: float
    lb_lower_bound: float
    opt_upper_bound: float
    suboptimal: bool

    def rows(self):
        return [("W", self.W),
                ("k_lb/W", self.k_lb / self.W),
                ("k_prime/W", self.k_prime / self.W),
                ("lb_lower_bound", self.lb_lower_bound),
                ("opt_upper_bound", self.opt_upper_bound),
                ("suboptimal", self.suboptimal)]


def solve_klb(cost_a, cost_b, W, tol=1e-10) -> float:
    """Threshold at which the two frozen link costs balance, by bisection.

    Finds k in (1, W-1) with C_A(k/W) = C_B(1 - k/W) to |difference| < tol.
    Both curves must be increasing so the difference is monotone in k.
    """
    _check_W(W)

    def diff(k):
        return cost_a(k / W) - cost_b(1 - k / W)

    lo, hi = 1.0, W - 1.0
    f_lo, f_hi = diff(lo), diff(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise BoundsError("link costs never balance for k in (1, W-1)")
    while True:
        mid = (lo + hi) / 2
        f_mid = diff(mid)
        if abs(f_mid) < tol or hi - lo < tol:
            return mid
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid


def upper_bound(cost_a, cost_b, W, k) -> float:
    """Ceiling on long-run average cost for the threshold-k rule."""
    _check_W(W)
    _check_k(W, k)
    u = (k + 1) / W
    v = 1 + 2 / W - u
    return u * cost_a(u) + v * cost_b(v)


def lower_bound(cost_a, cost_b, W, k) -> float:
    """Floor on long-run average cost for the threshold-k rule."""
    _check_W(W)
    _check_k(W, k)
    u = (k - 1) / W
    v = 1 - 2 / W - u
    return u * cost_a(u) + v * cost_b(v)


def argmin_upper(cost_a, cost_b, W, tol_frac=1e-6):
    """Threshold minimizing the cost ceiling, by golden-section search.

    Returns (k_prime, ceiling value); the bracket shrinks below tol_frac * W.
    """
    _check_W(W)
    lo, hi = 1.0, W - 1.0
    tol = tol_frac * W

    def f(k):
        return upper_bound(cost_a, cost_b, W, k)

    a, b = hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo)
    fa, fb = f(a), f(b)
    while hi - lo > tol:
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - GOLDEN * (hi - lo)
            fa = f(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + GOLDEN * (hi - lo)
            fb = f(b)
    k = (lo + hi) / 2
    return k, f(k)


def verdict(cost_a, cost_b, W) -> BoundsReport:
    """Assemble the full report: balanced threshold, best ceiling, comparison."""
    k_lb = solve_klb(cost_a, cost_b, W)
    _check_k(W, k_lb)
    k_prime, ceiling = argmin_upper(cost_a, cost_b, W)
    floor = lower_bound(cost_a, cost_b, W, k_lb)
    return BoundsReport(W=W, k_lb=k_lb, k_prime=k_prime,
                        lb_lower_bound=floor, opt_upper_bound=ceiling,
                        suboptimal=ceiling < floor)


def simulate_threshold(model: ThresholdModel, steps, transient=None) -> float:
    """Average realized cost of running the threshold rule for many steps.

    Replays the exact window dynamics: each step prices the link chosen under
    the current count S, then the choice enters the window and the one from W
    steps back drops out. The first `transient` steps (default 5W) warm the
    window up and are excluded from the average.
    """
    if steps < 10 * model.W:
        raise BoundsError(f"need at least {10 * model.W} steps for a stable average")
    W, k = model.W, model.k
    if transient is None:
        transient = 5 * W
    # S is integral, so realized costs take at most W+1 values per link
    price_a = [model.cost_a(s / W) for s in range(W + 1)]
    price_b = [model.cost_b(1 - s / W) for s in range(W + 1)]
    window = [0] * W
    S = 0
    total = 0.0
    counted = 0
    for t in range(transient + steps):
        choice = 1 if S <= k else 0
        if t >= transient:
            total += price_a[S] if choice else price_b[S]
            counted += 1
        S += choice - window[t % W]
        window[t % W] = choice
    return total / counted
