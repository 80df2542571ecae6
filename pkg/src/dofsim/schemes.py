"""Declarative transmission-scheme descriptors for the two-subband downlink.

A scheme is described by *what is sent*, not by code: a list of slots, a
list of precoded symbols with power terms of the form coeff * (P^hi - P^lo)
and target rate exponents, and an ordered successive-interference-
cancellation (SIC) decode plan per user.  The Monte Carlo link layer and
the analytic checks both consume these descriptors, so there is a single
source of truth per scheme.

Builders are provided for the five strategies under study:

* ``fdma_descriptor``             -- one full-power symbol per subband.
* ``zfbf_descriptor``             -- plain zero-forcing beamforming.
* ``s3_descriptor``               -- two private symbols plus a repeated
                                     overheard symbol, no common layer.
* ``optimal_unmatched_descriptor``-- rate-splitting with a repeated
                                     aligned symbol (unmatched CSIT).
* ``matched_descriptor``          -- per-subband rate-splitting (matched
                                     CSIT).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .channel import SUBBANDS, USERS, QualityPair, Scenario

OWNERS = USERS + ("common",)
PRECODER_KINDS = ("basis_e1", "zf_orth", "aligned")


class AchievabilityError(Exception):
    """A decode step asks for more rate than its SINR exponent supports."""


@dataclass(frozen=True)
class Precoder:
    """Transmit direction of one symbol.

    basis_e1 sends on the first antenna; zf_orth sends orthogonally to the
    referenced user's channel estimate; aligned sends along it.
    """

    kind: str
    user: Optional[str] = None
    subband: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in PRECODER_KINDS:
            raise ValueError(f"precoder kind must be one of {PRECODER_KINDS}, got {self.kind!r}")
        if self.kind == "basis_e1":
            if self.user is not None or self.subband is not None:
                raise ValueError("basis_e1 takes no estimate reference")
        else:
            if self.user not in USERS or self.subband not in SUBBANDS:
                raise ValueError(
                    f"{self.kind} needs a (user, subband) estimate reference, "
                    f"got ({self.user!r}, {self.subband!r})"
                )


def basis_e1() -> Precoder:
    return Precoder("basis_e1")


def zf_orth(user: str, subband: str) -> Precoder:
    return Precoder("zf_orth", user, subband)


def aligned(user: str, subband: str) -> Precoder:
    return Precoder("aligned", user, subband)


@dataclass(frozen=True)
class PowerTerm:
    """Symbol power coeff * (P^hi - P^lo), or coeff * P^hi when lo is None."""

    coeff: Fraction
    hi: float
    lo: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff <= 0:
            raise ValueError(f"power coefficient must be positive, got {self.coeff}")
        if not 0 <= self.hi <= 1:
            raise ValueError(f"power exponent must lie in [0, 1], got hi={self.hi}")
        if self.lo is not None and not self.lo < self.hi:
            raise ValueError(f"need lo < hi in a power term, got hi={self.hi}, lo={self.lo}")

    def value(self, p: float) -> float:
        base = p ** self.hi - (p ** self.lo if self.lo is not None else 0.0)
        return float(self.coeff) * base

    def ledger(self) -> List[Tuple[float, Fraction]]:
        """Signed (exponent, coefficient) entries for the telescoping check."""
        entries = [(float(self.hi), self.coeff)]
        if self.lo is not None:
            entries.append((float(self.lo), -self.coeff))
        return entries


@dataclass(frozen=True)
class SymbolSpec:
    """One transmit instance of a symbol in one slot.

    A payload repeated across slots (the overheard symbol u_0) appears as
    two instances sharing the same id; its rate counts once.
    """

    id: str
    owner: str
    slot: str
    precoder: Precoder
    power: PowerTerm
    rate_exponent: float

    def __post_init__(self) -> None:
        if self.owner not in OWNERS:
            raise ValueError(f"symbol owner must be one of {OWNERS}, got {self.owner!r}")
        if self.slot not in SUBBANDS:
            raise ValueError(f"symbol slot must be one of {SUBBANDS}, got {self.slot!r}")
        if self.rate_exponent < 0:
            raise ValueError(f"rate exponent must be nonnegative, got {self.rate_exponent}")


@dataclass(frozen=True)
class DecodeStep:
    """Decode `symbol` at `user` in `slot`, with `cancel` already removed."""

    user: str
    slot: str
    symbol: str
    cancel: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SchemeDescriptor:
    name: str
    scenario: Optional[str]
    quality: Optional[QualityPair]
    slots: Tuple[Tuple[str, float], ...]
    symbols: Tuple[SymbolSpec, ...]
    decode_plan: Tuple[DecodeStep, ...]
    #: common symbol id -> fraction of its rate credited to user1
    common_split: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        slot_ids = [s for s, _ in self.slots]
        if len(set(slot_ids)) != len(slot_ids) or not slot_ids:
            raise ValueError("slots must be nonempty with unique ids")
        if any(dur <= 0 for _, dur in self.slots):
            raise ValueError("slot durations must be positive")
        seen_instances = set()
        for sym in self.symbols:
            if sym.slot not in slot_ids:
                raise ValueError(f"symbol {sym.id!r} references unknown slot {sym.slot!r}")
            if (sym.id, sym.slot) in seen_instances:
                raise ValueError(f"duplicate instance of symbol {sym.id!r} in slot {sym.slot!r}")
            seen_instances.add((sym.id, sym.slot))
        for sym_id, group in self._by_id().items():
            owners = {s.owner for s in group}
            rates = {s.rate_exponent for s in group}
            if len(owners) > 1 or len(rates) > 1:
                raise ValueError(f"instances of {sym_id!r} disagree on owner or rate")
        self._check_power_identity()
        self._check_plan()
        split = dict(self.common_split)
        for sym in self.symbols:
            if sym.owner == "common" and sym.id not in split:
                split[sym.id] = 0.5
        for sym_id, share in split.items():
            if not 0 <= share <= 1:
                raise ValueError(f"common split for {sym_id!r} must lie in [0, 1], got {share}")
        object.__setattr__(self, "common_split", split)

    def _by_id(self) -> Dict[str, List[SymbolSpec]]:
        groups: Dict[str, List[SymbolSpec]] = {}
        for sym in self.symbols:
            groups.setdefault(sym.id, []).append(sym)
        return groups

    def _check_power_identity(self) -> None:
        for slot_id, _ in self.slots:
            ledger = power_ledger(self, slot_id)
            if ledger != {1.0: Fraction(1)}:
                raise ValueError(
                    f"power identity violated in slot {slot_id!r} of {self.name!r}: "
                    f"summed terms are {ledger} instead of P"
                )

    def _check_plan(self) -> None:
        instances = {(s.id, s.slot) for s in self.symbols}
        ids = {s.id for s in self.symbols}
        decoded: Dict[str, set] = {u: set() for u in USERS}
        for step in self.decode_plan:
            if step.user not in USERS:
                raise ValueError(f"decode step names unknown user {step.user!r}")
            if (step.symbol, step.slot) not in instances:
                raise ValueError(
                    f"decode plan references {step.symbol!r} in slot {step.slot!r}, "
                    "which is not transmitted there"
                )
            for c in step.cancel:
                if c not in ids:
                    raise ValueError(f"decode plan cancels unknown symbol {c!r}")
                if c not in decoded[step.user]:
                    raise ValueError(
                        f"{step.user} cancels {c!r} before having decoded it"
                    )
            decoded[step.user].add(step.symbol)
        undecoded = ids - set().union(*decoded.values()) if decoded else ids
        if undecoded:
            raise ValueError(f"symbols {sorted(undecoded)} are never decoded")

    # -- accessors ---------------------------------------------------------

    def total_duration(self) -> float:
        return float(sum(dur for _, dur in self.slots))

    def slot_duration(self, slot_id: str) -> float:
        return float(dict(self.slots)[slot_id])

    def instances_in(self, slot_id: str) -> List[SymbolSpec]:
        return [s for s in self.symbols if s.slot == slot_id]

    def instance(self, sym_id: str, slot_id: str) -> SymbolSpec:
        for s in self.symbols:
            if s.id == sym_id and s.slot == slot_id:
                return s
        raise KeyError(f"no instance of {sym_id!r} in slot {slot_id!r}")

    def symbol_ids(self) -> List[str]:
        out: List[str] = []
        for s in self.symbols:
            if s.id not in out:
                out.append(s.id)
        return out

    def decoders_of(self, sym_id: str) -> Tuple[str, ...]:
        return tuple(u for u in USERS if any(
            st.symbol == sym_id and st.user == u for st in self.decode_plan
        ))

    def steps_for(self, user: str) -> List[DecodeStep]:
        return [st for st in self.decode_plan if st.user == user]

    def to_dict(self) -> dict:
        """JSON-ready description (slots, symbols, decode plan)."""
        return {
            "name": self.name,
            "scenario": self.scenario,
            "beta": None if self.quality is None else float(self.quality.beta),
            "alpha": None if self.quality is None else float(self.quality.alpha),
            "slots": [[sid, dur] for sid, dur in self.slots],
            "symbols": [
                {
                    "id": s.id,
                    "owner": s.owner,
                    "slot": s.slot,
                    "precoder": {
                        "kind": s.precoder.kind,
                        "user": s.precoder.user,
                        "subband": s.precoder.subband,
                    },
                    "power": {
                        "coeff": [s.power.coeff.numerator, s.power.coeff.denominator],
                        "hi": s.power.hi,
                        "lo": s.power.lo,
                    },
                    "rate_exponent": s.rate_exponent,
                }
                for s in self.symbols
            ],
            "decode_plan": [
                {"user": st.user, "slot": st.slot, "symbol": st.symbol,
                 "cancel": list(st.cancel)}
                for st in self.decode_plan
            ],
            "common_split": dict(self.common_split),
        }


def power_ledger(d: SchemeDescriptor, slot_id: str) -> Dict[float, Fraction]:
    """Net (exponent -> coefficient) map of one slot's transmit power.

    The per-slot full-power identity holds exactly when the ledger reduces
    to {1.0: 1}, i.e. the terms telescope to P for every P.
    """
    acc: Dict[float, Fraction] = {}
    for sym in d.instances_in(slot_id):
        for exponent, coeff in sym.power.ledger():
            acc[exponent] = acc.get(exponent, Fraction(0)) + coeff
    return {e: c for e, c in acc.items() if c != 0}


# -- descriptor builders ---------------------------------------------------

_TWO_SLOTS = (("A", 1.0), ("B", 1.0))


def fdma_descriptor() -> SchemeDescriptor:
    """Subband A carries user1's symbol at full power, subband B user2's."""
    return SchemeDescriptor(
        name="fdma",
        scenario=None,
        quality=None,
        slots=_TWO_SLOTS,
        symbols=(
            SymbolSpec("x_A", "user1", "A", basis_e1(), PowerTerm(1, 1.0), 1.0),
            SymbolSpec("x_B", "user2", "B", basis_e1(), PowerTerm(1, 1.0), 1.0),
        ),
        decode_plan=(
            DecodeStep("user1", "A", "x_A"),
            DecodeStep("user2", "B", "x_B"),
        ),
    )


def zfbf_descriptor(q: QualityPair, scenario: Scenario) -> SchemeDescriptor:
    """Both users served in both subbands with half power and ZF precoding.

    Each symbol's rate exponent equals the CSIT quality of its decoder's
    own estimate in that subband: the co-scheduled symbol is zero-forced
    against that estimate, so the leakage floor sits at P^(1 - quality).
    """
    symbols = []
    plan = []
    for slot in SUBBANDS:
        r1 = float(scenario.quality("user1", slot, q))
        r2 = float(scenario.quality("user2", slot, q))
        symbols.append(SymbolSpec(f"u_{slot}", "user1", slot,
                                  zf_orth("user2", slot), PowerTerm(Fraction(1, 2), 1.0), r1))
        symbols.append(SymbolSpec(f"v_{slot}", "user2", slot,
                                  zf_orth("user1", slot), PowerTerm(Fraction(1, 2), 1.0), r2))
        plan.append(DecodeStep("user1", slot, f"u_{slot}"))
        plan.append(DecodeStep("user2", slot, f"v_{slot}"))
    plan.sort(key=lambda st: st.user)
    return SchemeDescriptor(
        name="zfbf", scenario=scenario.kind, quality=q,
        slots=_TWO_SLOTS, symbols=tuple(symbols), decode_plan=tuple(plan),
    )


def s3_descriptor(q: QualityPair) -> SchemeDescriptor:
    """Full-power scheme without a common layer (unmatched CSIT only).

    One repeated symbol u_0 rides along the interfering user's estimate in
    both subbands at half power and is decoded first by both users at rate
    exponent beta; once removed, v_A and u_B are interference-free and
    carry a full rate exponent each.
    """
    b = float(q.beta)
    half = PowerTerm(Fraction(1, 2), 1.0)
    symbols = (
        SymbolSpec("u_0", "user1", "A", aligned("user2", "A"), half, b),
        SymbolSpec("v_A", "user2", "A", zf_orth("user1", "A"), half, 1.0),
        SymbolSpec("u_0", "user1", "B", aligned("user1", "B"), half, b),
        SymbolSpec("u_B", "user1", "B", zf_orth("user2", "B"), half, 1.0),
    )
    plan = (
        DecodeStep("user1", "A", "u_0"),
        DecodeStep("user1", "B", "u_B", cancel=("u_0",)),
        DecodeStep("user2", "B", "u_0"),
        DecodeStep("user2", "A", "v_A", cancel=("u_0",)),
    )
    return SchemeDescriptor(
        name="s3", scenario="unmatched", quality=q,
        slots=_TWO_SLOTS, symbols=symbols, decode_plan=plan,
    )


def optimal_unmatched_descriptor(
    q: QualityPair, common_split: Optional[Mapping[str, float]] = None
) -> SchemeDescriptor:
    """Rate-splitting scheme achieving the unmatched-CSIT sum DoF.

    Per subband: a common message on top (power P - P^beta), the decoder's
    well-estimated private symbol zero-forced at P^beta/2, the cross
    private symbol at P^alpha/2, and the repeated symbol u_0 filling the
    (P^beta - P^alpha)/2 gap along the interfered estimate.  Symbols whose
    power term vanishes (common at beta = 1, u_0 at beta = alpha) are
    dropped along with their decode steps.
    """
    b, a = float(q.beta), float(q.alpha)
    has_common = b < 1.0
    has_u0 = b > a
    symbols: List[SymbolSpec] = []
    if has_common:
        symbols.append(SymbolSpec("xc_A", "common", "A", basis_e1(),
                                  PowerTerm(1, 1.0, b), 1.0 - b))
    symbols.append(SymbolSpec("u_A", "user1", "A", zf_orth("user2", "A"),
                              PowerTerm(Fraction(1, 2), a), a))
    if has_u0:
        symbols.append(SymbolSpec("u_0", "user1", "A", aligned("user2", "A"),
                                  PowerTerm(Fraction(1, 2), b, a), b - a))
    symbols.append(SymbolSpec("v_A", "user2", "A", zf_orth("user1", "A"),
                              PowerTerm(Fraction(1, 2), b), b))
    if has_common:
        symbols.append(SymbolSpec("xc_B", "common", "B", basis_e1(),
                                  PowerTerm(1, 1.0, b), 1.0 - b))
    symbols.append(SymbolSpec("v_B", "user2", "B", zf_orth("user1", "B"),
                              PowerTerm(Fraction(1, 2), a), a))
    if has_u0:
        symbols.append(SymbolSpec("u_0", "user1", "B", aligned("user1", "B"),
                                  PowerTerm(Fraction(1, 2), b, a), b - a))
    symbols.append(SymbolSpec("u_B", "user1", "B", zf_orth("user2", "B"),
                              PowerTerm(Fraction(1, 2), b), b))

    common = ("xc_A", "xc_B") if has_common else ()
    u0 = ("u_0",) if has_u0 else ()
    plan: List[DecodeStep] = []
    for user in USERS:
        plan.extend(DecodeStep(user, sym[-1], sym) for sym in common)
    if has_u0:
        plan.append(DecodeStep("user1", "A", "u_0", cancel=common[:1]))
    plan.append(DecodeStep("user1", "A", "u_A", cancel=common[:1] + u0))
    plan.append(DecodeStep("user1", "B", "u_B", cancel=common[1:] + u0))
    if has_u0:
        plan.append(DecodeStep("user2", "B", "u_0", cancel=common[1:]))
    plan.append(DecodeStep("user2", "B", "v_B", cancel=common[1:] + u0))
    plan.append(DecodeStep("user2", "A", "v_A", cancel=common[:1] + u0))

    if common_split is None:
        common_split = {"xc_A": 1.0, "xc_B": 0.0} if has_common else {}
    return SchemeDescriptor(
        name="optimal-unmatched", scenario="unmatched", quality=q,
        slots=_TWO_SLOTS, symbols=tuple(symbols), decode_plan=tuple(plan),
        common_split=common_split,
    )


def matched_descriptor(
    q: QualityPair, common_split: Optional[Mapping[str, float]] = None
) -> SchemeDescriptor:
    """Per-subband rate-splitting achieving the matched-CSIT sum DoF.

    Subband A uses quality beta, subband B uses alpha: a common message at
    P - P^quality over two zero-forced private symbols at P^quality/2.  A
    subband with quality 0 collapses to the common message alone at full
    power (the private symbols would carry rate 0).
    """
    symbols: List[SymbolSpec] = []
    plan_common: List[DecodeStep] = []
    plan_private: List[DecodeStep] = []
    present_common: List[str] = []
    for slot, j in (("A", float(q.beta)), ("B", float(q.alpha))):
        xc = f"xc_{slot}"
        if j == 0.0:
            symbols.append(SymbolSpec(xc, "common", slot, basis_e1(),
                                      PowerTerm(1, 1.0), 1.0))
            present_common.append(xc)
            continue
        if j < 1.0:
            symbols.append(SymbolSpec(xc, "common", slot, basis_e1(),
                                      PowerTerm(1, 1.0, j), 1.0 - j))
            present_common.append(xc)
        cancel = (xc,) if j < 1.0 else ()
        symbols.append(SymbolSpec(f"u_{slot}", "user1", slot,
                                  zf_orth("user2", slot), PowerTerm(Fraction(1, 2), j), j))
        symbols.append(SymbolSpec(f"v_{slot}", "user2", slot,
                                  zf_orth("user1", slot), PowerTerm(Fraction(1, 2), j), j))
        plan_private.append(DecodeStep("user1", slot, f"u_{slot}", cancel=cancel))
        plan_private.append(DecodeStep("user2", slot, f"v_{slot}", cancel=cancel))
    for user in USERS:
        plan_common.extend(DecodeStep(user, xc[-1], xc) for xc in present_common)

    if common_split is None:
        common_split = {xc: (1.0 if xc == "xc_A" else 0.0) for xc in present_common}
    return SchemeDescriptor(
        name="matched-optimal", scenario="matched", quality=q,
        slots=_TWO_SLOTS, symbols=tuple(symbols),
        decode_plan=tuple(plan_common + plan_private),
        common_split=common_split,
    )


_BUILDERS = {
    "fdma": lambda q, scenario: fdma_descriptor(),
    "zfbf": lambda q, scenario: zfbf_descriptor(q, scenario),
    "s3": lambda q, scenario: _require_unmatched(scenario) or s3_descriptor(q),
    "optimal-unmatched": lambda q, scenario: optimal_unmatched_descriptor(q),
    "matched-optimal": lambda q, scenario: matched_descriptor(q),
}


def _require_unmatched(scenario: Scenario) -> None:
    if scenario.kind != "unmatched":
        raise ValueError("the s3 scheme is defined for the unmatched scenario only")


#: Scheme names accepted by build_descriptor (and the command line).
SCHEME_NAMES = tuple(sorted(_BUILDERS))


def build_descriptor(scheme: str, q: QualityPair, scenario: Scenario) -> SchemeDescriptor:
    """Build any named scheme; scheme names match the command-line ones."""
    try:
        builder = _BUILDERS[scheme]
    except KeyError:
        raise ValueError(
            f"unknown scheme {scheme!r}; expected one of {sorted(_BUILDERS)}"
        ) from None
    if scheme == "optimal-unmatched" and scenario.kind != "unmatched":
        raise ValueError("optimal-unmatched requires the unmatched scenario")
    if scheme == "matched-optimal" and scenario.kind != "matched":
        raise ValueError("matched-optimal requires the matched scenario")
    return builder(q, scenario)


# -- analytic DoF ----------------------------------------------------------


def analytic_sum_dof(strategy: str, q: QualityPair, scenario="unmatched"):
    """Closed-form sum DoF (or normalised diagnostic ratio) of a strategy.

    Exact when `q` carries Fraction entries.  Strategies: fdma, zfbf, s3,
    optimal (aliases optimal-unmatched / matched-optimal), plus the two
    private-loading diagnostics icc-private and optimal-private which are
    undefined at beta = 0.
    """
    kind = scenario.kind if isinstance(scenario, Scenario) else str(scenario)
    if kind not in ("unmatched", "matched"):
        raise ValueError(f"unknown scenario {scenario!r}")
    beta, alpha = q.beta, q.alpha
    if strategy == "fdma":
        return 1
    if strategy == "zfbf":
        return beta + alpha
    if strategy == "s3":
        if kind != "unmatched":
            raise ValueError("the s3 scheme is defined for the unmatched scenario only")
        return 1 + beta / 2
    if strategy in ("optimal", "optimal-unmatched", "matched-optimal"):
        return 1 + (beta + alpha) / 2
    if strategy == "icc-private":
        if beta == 0:
            raise ValueError("icc-private is undefined at beta = 0")
        return (2 * beta + 2 * alpha + 2 * (beta - alpha)) / (3 * beta - alpha)
    if strategy == "optimal-private":
        if beta == 0:
            raise ValueError("optimal-private is undefined at beta = 0")
        return (2 * beta + 2 * alpha + (beta - alpha)) / (2 * beta)
    raise ValueError(f"unsupported strategy {strategy!r}")


def sum_dof_exponent(d: SchemeDescriptor) -> float:
    """Duration-weighted sum of symbol rate exponents per channel use.

    Repeated payloads count once (weighted by their first instance's slot).
    """
    total = 0.0
    for sym_id, group in d._by_id().items():
        total += group[0].rate_exponent * d.slot_duration(group[0].slot)
    return total / d.total_duration()


def user_dof_exponents(d: SchemeDescriptor) -> Tuple[float, float]:
    """Per-user analytic DoF pair implied by ownership and the common split."""
    per_user = {"user1": 0.0, "user2": 0.0}
    for sym_id, group in d._by_id().items():
        weighted = group[0].rate_exponent * d.slot_duration(group[0].slot)
        if group[0].owner == "common":
            share = d.common_split[sym_id]
            per_user["user1"] += share * weighted
            per_user["user2"] += (1.0 - share) * weighted
        else:
            per_user[group[0].owner] += weighted
    total = d.total_duration()
    return per_user["user1"] / total, per_user["user2"] / total


# -- static achievability --------------------------------------------------


@dataclass(frozen=True)
class StepMargin:
    user: str
    slot: str
    symbol: str
    signal_exponent: float
    interference_exponent: float  # -inf when the step sees no interference
    margin: float


def _received_exponent(d: SchemeDescriptor, sym: SymbolSpec, user: str) -> float:
    """High-SNR exponent of a symbol's received power at one user.

    Full power exponent unless the symbol is zero-forced against this very
    user's estimate, in which case the leakage is reduced by that
    estimate's quality exponent.
    """
    e = float(sym.power.hi)
    if sym.precoder.kind == "zf_orth" and sym.precoder.user == user:
        scenario = Scenario(d.scenario)
        e -= float(scenario.quality(user, sym.slot, d.quality))
    return e


def static_achievability_check(d: SchemeDescriptor) -> List[StepMargin]:
    """Verify every decode step's rate against its SINR exponent ladder.

    For each step: signal exponent minus the largest not-yet-cancelled
    same-slot interference exponent (floored at the noise level 0) must
    cover the symbol's rate exponent.  Raises AchievabilityError naming
    the first failing step; returns all step margins otherwise.
    """
    report: List[StepMargin] = []
    for step in d.decode_plan:
        target = d.instance(step.symbol, step.slot)
        signal = _received_exponent(d, target, step.user)
        others = [
            _received_exponent(d, sym, step.user)
            for sym in d.instances_in(step.slot)
            if sym.id != step.symbol and sym.id not in step.cancel
        ]
        interference = max(others) if others else float("-inf")
        margin = signal - max(interference, 0.0) - target.rate_exponent
        if margin < -1e-12:
            raise AchievabilityError(
                f"{d.name}: step ({step.user}, slot {step.slot}, {step.symbol}) "
                f"needs rate exponent {target.rate_exponent} but the SINR "
                f"exponent is {signal - max(interference, 0.0):.6g}"
            )
        report.append(StepMargin(step.user, step.slot, step.symbol,
                                 signal, interference, margin))
    return report
