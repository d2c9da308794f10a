"""Truncated saddle-node vector field ``Y_mu(y) = alpha*y**2 + beta*mu``.

The flow of a Riccati field is a one-parameter group of Moebius maps, so
the time-t map has the closed form

    y -> (y + c) / (1 - d*y)

with ``(c, d)`` depending on the sign of ``mu`` (tangent, rational and
hyperbolic-tangent regimes).  Everything else in this module, including the
flow-time integrals, is expressed through the matching antiderivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, EscapeError, SingularIntegralError


@dataclass(frozen=True)
class SaddleNodeNormalForm:
    """Parameters of the field and of the core interval ``(-delta1, delta1)``.

    ``mu`` ranges over the open interval ``(-t2, t1)``.
    """

    alpha: float = 1.0
    beta: float = 1.0
    delta1: float = 0.3
    t1: float = 0.05
    t2: float = 0.05

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.delta1 > 0):
            raise DomainError("alpha, beta and delta1 must be positive")
        if not (0 < self.t2 <= self.t1):
            raise DomainError("need 0 < t2 <= t1")
        zero = math.sqrt(self.beta * self.t2 / self.alpha)
        if zero >= self.delta1:
            raise DomainError(
                "field zeros at mu=-t2 (+-%.6g) leave the core" % zero)
        # the time-one map must exist near 0 for every mu < t1
        if self.alpha * math.sqrt(self.beta * self.t1 / self.alpha) >= math.pi / 2:
            raise DomainError("t1 too large: time-one flow blows up")

    # -- domain checks -------------------------------------------------
    def check_mu(self, mu):
        if not (-self.t2 < mu < self.t1):
            raise DomainError("mu=%r outside (-t2, t1) = (%r, %r)"
                              % (mu, -self.t2, self.t1))

    def check_y(self, y):
        if not (-self.delta1 < y < self.delta1):
            raise DomainError("y=%r outside the core (-%r, %r)"
                              % (y, self.delta1, self.delta1))

    # -- the field -----------------------------------------------------
    def eval_field(self, mu, y):
        self.check_mu(mu)
        self.check_y(y)
        return self.alpha * y * y + self.beta * mu

    def field(self, mu, y):
        """Unchecked ``Y_mu(y)``; valid for any real ``y``."""
        return self.alpha * y * y + self.beta * mu

    def field_derivative(self, mu, y):
        return 2.0 * self.alpha * y

    def critical_point(self, mu):
        """Zero of dY/dy.  Always 0 for the truncated field."""
        self.check_mu(mu)
        return 0.0

    def field_zeros(self, mu):
        """``(s_mu, q_mu)`` for ``mu < 0``, else ``None``."""
        self.check_mu(mu)
        if mu >= 0:
            return None
        k = math.sqrt(-self.beta * mu / self.alpha)
        return -k, k

    # -- closed-form flow ---------------------------------------------
    def mobius(self, mu, t=1.0):
        """Coefficients ``(c, d)`` of the time-t map ``(y + c)/(1 - d*y)``."""
        al = self.alpha
        if mu > 0:
            w = math.sqrt(self.beta * mu / al)
            if al * w * t >= math.pi / 2:
                raise DomainError("flow time %r exceeds the blow-up time" % t)
            tau = math.tan(al * w * t)
            return w * tau, tau / w
        if mu == 0:
            return 0.0, al * t
        k = math.sqrt(-self.beta * mu / al)
        th = math.tanh(al * k * t)
        return -k * th, th / k

    def flow(self, mu, y0, t=1.0):
        """Flow of ``Y_mu`` for time ``t`` from ``y0``, unrestricted in space.

        Raises :class:`EscapeError` only if the solution blows up.
        """
        c, d = self.mobius(mu, t)
        den = 1.0 - d * y0
        if den <= 0:
            raise EscapeError("flow from %r blows up before time %r" % (y0, t),
                              escape_time=self._blowup_time(mu, y0))
        return (y0 + c) / den

    def _blowup_time(self, mu, y0):
        al = self.alpha
        if mu > 0:
            w = math.sqrt(self.beta * mu / al)
            return (math.pi / 2 - math.atan(y0 / w)) / (al * w)
        if mu == 0:
            return 1.0 / (al * y0)
        k = math.sqrt(-self.beta * mu / al)
        return math.log((y0 + k) / (y0 - k)) / (2 * al * k)

    def time_one_map(self, mu, y0, strict=True):
        """Unit-time flow from ``y0``.

        With ``strict`` the trajectory must stay in the core; the
        :class:`EscapeError` carries the time at which it would leave.
        """
        self.check_mu(mu)
        if strict:
            self.check_y(y0)
        y1 = self.flow(mu, y0)
        if strict and not (-self.delta1 < y1 < self.delta1):
            edge = self.delta1 if y1 > y0 else -self.delta1
            lo, hi = sorted((y0, edge))
            t_esc = abs(self._integral(mu, lo, hi))
            raise EscapeError("flow from %r leaves the core at t=%.6g"
                              % (y0, t_esc), escape_time=t_esc)
        return y1

    def time_one_derivative(self, mu, y0):
        """d/dy of the time-one map, from the Moebius form.

        Equal to ``Y(f(y0))/Y(y0)`` away from zeros of the field, to
        ``exp(Y'(y0))`` at a hyperbolic zero and to 1 at the degenerate one.
        """
        self.check_mu(mu)
        c, d = self.mobius(mu)
        den = 1.0 - d * y0
        if den <= 0:
            raise EscapeError("flow from %r blows up" % y0,
                              escape_time=self._blowup_time(mu, y0))
        return (1.0 + c * d) / (den * den)

    # -- flow time -----------------------------------------------------
    def _antiderivative(self, mu, y):
        al = self.alpha
        if mu > 0:
            w = math.sqrt(self.beta * mu / al)
            return math.atan(y / w) / (al * w)
        if mu == 0:
            return -1.0 / (al * y)
        k = math.sqrt(-self.beta * mu / al)
        return math.log(abs((y - k) / (y + k))) / (2 * al * k)

    def _integral(self, mu, lo, hi):
        if mu <= 0:
            zeros = (0.0,) if mu == 0 else self.field_zeros(mu)
            for z in zeros:
                if lo <= z <= hi:
                    raise SingularIntegralError(
                        "[%r, %r] contains the rest point %r" % (lo, hi, z))
        return self._antiderivative(mu, hi) - self._antiderivative(mu, lo)

    def flow_time_between(self, mu, y_from, y_to):
        """Integral of ``dy / Y_mu(y)`` over ``[y_from, y_to]``."""
        self.check_mu(mu)
        self.check_y(y_from)
        self.check_y(y_to)
        if not y_from < y_to:
            raise DomainError("need y_from < y_to")
        return self._integral(mu, y_from, y_to)

    def passage_time(self, mu, y_from, y_to):
        """Unchecked flow time between two points, for ``mu > 0``."""
        return self._antiderivative(mu, y_to) - self._antiderivative(mu, y_from)
