"""Long-exact-sequence bookkeeping shared by the cohomology modules.

A sequence is a chain of nodes connected by leftward maps.  Some map ranks
are computed outright, some are forced (a zero source or target), and the
rest are solved from the exactness recurrence rank(f_j) + rank(f_{j+1}) =
dim A_{j+1} wherever dims are known.  A node verdict is EXACT only when
both adjacent ranks are resolved and the kernel/image count matches;
an inconsistent resolution is NOT-EXACT with the witness ranks attached,
and anything else stays UNDETERMINED.  End nodes of the displayed range
carry no exactness claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .status import (
    Certificate,
    NODE_EXACT,
    NODE_NOT_EXACT,
    NODE_UNDETERMINED,
)


@dataclass
class LESNode:
    name: str
    dim: int | None  # None = symbolic (not computable in scope)
    certificate: Certificate | None = None
    route: str | None = None  # for pi-nodes: COROLLARY | ORACLE | LES-BOUND
    group_order: int | None = None  # finite-group nodes (unit groups)

    def certified(self) -> bool:
        return self.dim is not None and (
            self.certificate is None or self.certificate.is_certified()
        )


@dataclass
class LESArrow:
    """Map from nodes[i+1] to nodes[i] (arrows point left along the chain)."""

    rank: int | None
    kind: str  # computed | forced-zero | route | solved | unknown
    note: str = ""


@dataclass
class LESVerdict:
    node: int
    verdict: str  # EXACT | NOT-EXACT | UNDETERMINED
    witness: str = ""


@dataclass
class LESReport:
    title: str
    nodes: list[LESNode] = field(default_factory=list)
    arrows: list[LESArrow] = field(default_factory=list)  # arrows[i]: nodes[i+1] -> nodes[i]
    verdicts: list[LESVerdict] = field(default_factory=list)

    def verdict_for(self, i: int) -> str:
        for v in self.verdicts:
            if v.node == i:
                return v.verdict
        return NODE_UNDETERMINED

    def not_exact_nodes(self) -> list[int]:
        return [v.node for v in self.verdicts if v.verdict == NODE_NOT_EXACT]

    def exact_everywhere_determinable(self) -> bool:
        return not self.not_exact_nodes()

    def rows(self):
        out = []
        for i, node in enumerate(self.nodes):
            out.append(
                {
                    "name": node.name,
                    "dim": node.dim,
                    "order": node.group_order,
                    "status": node.certificate.describe() if node.certificate else None,
                    "route": node.route,
                    "verdict": self.verdict_for(i),
                }
            )
        return out


def resolve_ranks(report: LESReport) -> None:
    """Fill solvable ranks and attach per-node exactness verdicts.

    Exactness at interior node j (with incoming arrow a_in = arrows[j] from
    the right neighbour and outgoing a_out = arrows[j-1]) means
    rank(a_in) = dim(node j) - rank(a_out).  Unknown ranks are solved by
    propagating this relation through nodes with known dimension; a
    propagation conflict, or a rank outside [0, min(dims)], is NOT-EXACT.
    """
    nodes, arrows = report.nodes, report.arrows
    n_nodes = len(nodes)
    conflicts: dict[int, str] = {}

    def arrow_bound(i: int) -> int | None:
        src = nodes[i + 1].dim
        tgt = nodes[i].dim
        if src is None or tgt is None:
            return None
        return min(src, tgt)

    # force zero ranks
    for i, arrow in enumerate(arrows):
        if arrow.rank is None:
            if (nodes[i + 1].dim == 0 and nodes[i + 1].certified()) or (
                nodes[i].dim == 0 and nodes[i].certified()
            ):
                arrow.rank = 0
                arrow.kind = "forced-zero"

    # propagate the exactness recurrence both ways until stable
    changed = True
    while changed:
        changed = False
        for j in range(1, n_nodes - 1):
            node = nodes[j]
            if node.dim is None or not node.certified():
                continue
            a_out = arrows[j - 1]
            a_in = arrows[j]
            if a_out.rank is not None and a_in.rank is None:
                val = node.dim - a_out.rank
                bound = arrow_bound(j)
                if val < 0 or (bound is not None and val > bound):
                    conflicts[j] = (
                        f"forced rank {val} for incoming map is out of range [0, {bound}]"
                    )
                    continue
                a_in.rank = val
                a_in.kind = "solved"
                changed = True
            elif a_in.rank is not None and a_out.rank is None:
                val = node.dim - a_in.rank
                bound = arrow_bound(j - 1)
                if val < 0 or (bound is not None and val > bound):
                    conflicts[j] = (
                        f"forced rank {val} for outgoing map is out of range [0, {bound}]"
                    )
                    continue
                a_out.rank = val
                a_out.kind = "solved"
                changed = True

    report.verdicts = []
    for j in range(1, n_nodes - 1):
        node = nodes[j]
        if j in conflicts:
            report.verdicts.append(LESVerdict(j, NODE_NOT_EXACT, conflicts[j]))
            continue
        a_out = arrows[j - 1]
        a_in = arrows[j]
        if node.dim is None or not node.certified() or a_out.rank is None or a_in.rank is None:
            reason = "symbolic node" if node.dim is None else "missing rank"
            report.verdicts.append(LESVerdict(j, NODE_UNDETERMINED, reason))
            continue
        kernel = node.dim - a_out.rank
        if a_in.rank == kernel:
            report.verdicts.append(LESVerdict(j, NODE_EXACT))
        else:
            report.verdicts.append(
                LESVerdict(
                    j,
                    NODE_NOT_EXACT,
                    f"image {a_in.rank} != kernel {kernel} at {node.name}",
                )
            )
