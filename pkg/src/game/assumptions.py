"""
Instance generators for the three subgroup assumptions behind the scheme
Each returns (D, W1, W2); they check distribution shapes only, never hardness.
"""

from dataclasses import dataclass
from typing import Tuple

from crypto.group import GroupDescriptor, GroupElement, PublicInfo, Subgroup, pair, random_target, sample_subgroup
from utils.helpers import Rng


@dataclass(frozen=True)
class Assumption1Instance:
    pi: PublicInfo
    g1: GroupElement
    g3: GroupElement


@dataclass(frozen=True)
class Assumption2Instance:
    pi: PublicInfo
    g1: GroupElement
    g3: GroupElement
    x1y1: GroupElement
    y2z1: GroupElement


@dataclass(frozen=True)
class Assumption3Instance:
    pi: PublicInfo
    g1: GroupElement
    g2: GroupElement
    g3: GroupElement
    g1_alpha_y1: GroupElement
    g1_s_y2: GroupElement


def assumption1_instance(descriptor: GroupDescriptor, rng: Rng) -> Tuple[Assumption1Instance, GroupElement, GroupElement]:
    """Subgroup decision: W1 in G_p1 against W2 in G_p1p2"""
    d = Assumption1Instance(
        pi=descriptor.public_info(),
        g1=sample_subgroup(descriptor, Subgroup.P1, rng),
        g3=sample_subgroup(descriptor, Subgroup.P3, rng),
    )
    return d, sample_subgroup(descriptor, Subgroup.P1, rng), sample_subgroup(descriptor, Subgroup.P1P2, rng)


def assumption2_instance(descriptor: GroupDescriptor, rng: Rng) -> Tuple[Assumption2Instance, GroupElement, GroupElement]:
    """General subgroup decision: W1 in G against W2 in G_p1p3"""
    def sample(which):
        return sample_subgroup(descriptor, which, rng)

    d = Assumption2Instance(
        pi=descriptor.public_info(),
        g1=sample(Subgroup.P1),
        g3=sample(Subgroup.P3),
        x1y1=sample(Subgroup.P1) * sample(Subgroup.P2),
        y2z1=sample(Subgroup.P2) * sample(Subgroup.P3),
    )
    return d, sample(Subgroup.FULL), sample(Subgroup.P1P3)


def assumption3_instance(descriptor: GroupDescriptor, rng: Rng):
    """Composite Diffie-Hellman: W1 uniform in G_T against W2 = e(g1, g1)^(alpha s)"""
    n = descriptor.n
    alpha, s = rng.randrange(0, n), rng.randrange(0, n)
    g1 = sample_subgroup(descriptor, Subgroup.P1, rng)
    d = Assumption3Instance(
        pi=descriptor.public_info(),
        g1=g1,
        g2=sample_subgroup(descriptor, Subgroup.P2, rng),
        g3=sample_subgroup(descriptor, Subgroup.P3, rng),
        g1_alpha_y1=(g1 ** alpha) * sample_subgroup(descriptor, Subgroup.P2, rng),
        g1_s_y2=(g1 ** s) * sample_subgroup(descriptor, Subgroup.P2, rng),
    )
    full = descriptor.g_full
    return d, random_target(pair(full, full), rng), pair(g1, g1) ** (alpha * s)
