"""End-list bookkeeping for chained gluings, shared by the sign tests.

A component is a piece with connected boundary and ordered end lists.
Gluing takes the last outgoing end of the left piece onto the first
incoming end of the right piece; the merged lists keep the induced
order.
"""

from dataclasses import dataclass

from quiltsign.orient import SignContext, strip_end_glue_sign


@dataclass(frozen=True)
class Component:
    in_ends: tuple
    out_ends: tuple


def glue(ctx: SignContext, left: Component, right: Component):
    """Returns (sign, merged component)."""
    if not left.out_ends or not right.in_ends:
        raise ValueError("nothing to glue")
    sign = strip_end_glue_sign(ctx, right.in_ends[1:], left.out_ends[:-1],
                               right.out_ends, True)
    merged = Component(left.in_ends + right.in_ends[1:],
                       left.out_ends[:-1] + right.out_ends)
    return sign, merged


def random_component(rng, stem: str, max_ends: int = 3,
                     min_in: int = 0, min_out: int = 0) -> Component:
    n_in = rng.randint(min_in, max_ends)
    n_out = rng.randint(min_out, max_ends)
    return Component(tuple(f"{stem}i{k}" for k in range(n_in)),
                     tuple(f"{stem}o{k}" for k in range(n_out)))


def random_context(rng, components, max_rank: int = 4,
                   max_ind: int = 5) -> SignContext:
    ends = [e for comp in components for e in comp.in_ends + comp.out_ends]
    return SignContext(rng.randint(1, max_rank),
                       {e: rng.randint(-max_ind, max_ind) for e in ends})
