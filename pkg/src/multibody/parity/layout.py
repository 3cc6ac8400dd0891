from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import networkx
from networkx import Graph

from ..gadget import GadgetReport, GadgetSpec, build_n_local, verify_gadget
from ..spin import IsingHamiltonian
from .embed import EmbeddingMap, Pair, Plaquette


@dataclass
class LayoutOptions:
    """A class to store layout options."""
    x_margin: int = 10
    y_margin: int = 5
    row_margin: int = 16
    col_margin: int = 16
    cell_width: int = 40
    cell_height: int = 40

DEFAULT_LAYOUT = LayoutOptions()

# Type aliases
Node = int

@dataclass(eq=True, frozen=True)
class Edge:
    src: Node
    dst: Node

@dataclass
class Point:
    x: int
    y: int

@dataclass(eq=True, frozen=True)
class GridIndex:
    col: int
    row: int

@dataclass
class LayoutResult:
    nodes: Dict[Node, Point]
    edges: Dict[Edge, List[Point]]

@dataclass(frozen=True)
class UnitCell:
    """One plaquette realized by a 4-local counting gadget."""
    plaquette: Plaquette
    location: GridIndex
    spec: GadgetSpec

    def gadget(self) -> IsingHamiltonian:
        return build_n_local(self.spec)

    def verify(self) -> GadgetReport:
        return verify_gadget(self.gadget(), self.spec)

@dataclass
class UnitCellLayout:
    cells: Tuple[UnitCell, ...]
    graph: Graph
    result: LayoutResult = field(repr=False)

    def rows(self) -> Dict[int, List[Node]]:
        out: Dict[int, List[Node]] = {}
        for node, cell in enumerate(self.cells):
            out.setdefault(cell.location.row, []).append(node)
        return out


def cell_spec(C: float) -> GadgetSpec:
    """Gadget for ``-C`` times a 4-spin product, scaled to keep the validity margin at ``C``."""
    return GadgetSpec(N=4, J_N=-C, J_a=4 * C, q_0=2 * C)


def cell_location(plaquette: Plaquette) -> GridIndex:
    """Grid position of the plaquette's top-left physical spin ``(i, j)``: row i, column j-i-1."""
    i, j = min(plaquette.spins)
    return GridIndex(col=j - i - 1, row=i)


def adjacency(cells: Tuple[UnitCell, ...]) -> Graph:
    """Cells are adjacent when they share a physical spin; edges record the shared spins."""
    graph = networkx.Graph()
    graph.add_nodes_from(range(len(cells)))
    owners: Dict[Pair, List[Node]] = {}
    for node, cell in enumerate(cells):
        for spin in cell.plaquette.spins:
            owners.setdefault(spin, []).append(node)
    for spin, nodes in owners.items():
        for a in nodes:
            for b in nodes:
                if a < b:
                    if graph.has_edge(a, b):
                        graph.edges[a, b]["shared"].append(spin)
                    else:
                        graph.add_edge(a, b, shared=[spin])
    return graph


def calculate_coordinates(locations: Dict[Node, GridIndex],
                          graph: Graph,
                          layout_options: LayoutOptions = DEFAULT_LAYOUT) -> LayoutResult:
    """Place cells on a uniform grid and route every adjacency as a straight segment
    between cell centers.
    """
    x_step = layout_options.cell_width + layout_options.col_margin
    y_step = layout_options.cell_height + layout_options.row_margin
    nodes = {node: Point(layout_options.x_margin + gi.col * x_step,
                         layout_options.y_margin + gi.row * y_step)
             for node, gi in locations.items()}

    def center(node: Node) -> Point:
        pt = nodes[node]
        return Point(pt.x + layout_options.cell_width // 2, pt.y + layout_options.cell_height // 2)

    edges = {Edge(a, b): [center(a), center(b)] for a, b in sorted(graph.edges())}
    return LayoutResult(nodes, edges)


def unit_cell_layout(e: EmbeddingMap, layout_options: LayoutOptions = DEFAULT_LAYOUT) -> UnitCellLayout:
    spec = cell_spec(e.C)
    cells = tuple(UnitCell(p, cell_location(p), spec) for p in e.plaquettes)
    graph = adjacency(cells)
    result = calculate_coordinates({node: cell.location for node, cell in enumerate(cells)},
                                   graph, layout_options)
    return UnitCellLayout(cells, graph, result)
