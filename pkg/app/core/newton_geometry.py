"""
Newton 多边形 / 多面体
二维、三维精确凸包，面枚举，面与权重的对应，以及形状判定（斜边、梯形、N(P) 形状）
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from app.core.checks import CheckResult, FAIL, PASS, check
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracPoly, Number, WeightVector, as_rational, format_rational

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Point = Tuple[Number, ...]

POLYGON_AXES = ("x", "y")
POLYTOPE_AXES = ("F", "G", "x")

FLOOR = "floor"
CEILING = "ceiling"
VERTICAL = "vertical"
SLANTED_PLANE = "slanted-plane"
OTHER = "other"

PARALLEL_FOG = "parallel-FOG"
PARALLEL_FOX = "parallel-FOx"
PARALLEL_GOX = "parallel-GOx"
SLANTED = "slanted"


@dataclass(frozen=True)
class Face:
    """多面体的面；normal 只对余维 1 的面给出（互素整数、外法向）"""
    dim: int
    vertex_ids: Tuple[int, ...]
    normal: Optional[Tuple[int, ...]] = None
    classification: str = OTHER


@dataclass
class LatticePolytope:
    """有理坐标凸包

    dim 为环境维数（2 或 3），affine_dim 为仿射包维数；
    faces 只列出余维 1 的面，退化凸包（affine_dim < dim）没有这样的面
    """
    dim: int
    affine_dim: int
    axes: Tuple[str, ...]
    vertices: List[Point]
    faces: List[Face]
    edges: List[Tuple[int, int]]
    source: Optional[FracPoly] = field(default=None, repr=False)

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def vertex_index(self, point: Sequence) -> Optional[int]:
        key = tuple(as_rational(c) for c in point)
        for i, v in enumerate(self.vertices):
            if v == key:
                return i
        return None

    def support_value(self, face: Face) -> Number:
        if face.normal is None:
            raise ToolkitError("weight cone not one-dimensional")
        return _dot(face.normal, self.vertices[face.vertex_ids[0]])

    def contains(self, point: Sequence) -> bool:
        """点是否满足全部面的半空间不等式（仅全维凸包）"""
        if not self.is_full_dimensional:
            raise ToolkitError("degenerate polytope has no facet inequalities")
        pt = tuple(as_rational(c) for c in point)
        return all(_dot(face.normal, pt) <= self.support_value(face) for face in self.faces)

    def face_points(self, face: Face) -> List[Point]:
        return [self.vertices[i] for i in face.vertex_ids]


# ---- 向量工具 ----

def _dot(a: Sequence, b: Sequence) -> Number:
    return sum((x * y for x, y in zip(a, b)), 0)


def _sub(a: Sequence, b: Sequence) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def _cross(a: Sequence, b: Sequence) -> Point:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _cross2(o: Sequence, a: Sequence, b: Sequence) -> Number:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def primitive_vector(vec: Sequence) -> Tuple[int, ...]:
    """把有理向量缩放成同方向的互素整数向量"""
    fracs = [Fraction(c) for c in vec]
    if all(c == 0 for c in fracs):
        raise ToolkitError("zero vector")
    lcm_den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in fracs), 1)
    ints = [int(c * lcm_den) for c in fracs]
    common = reduce(gcd, (abs(c) for c in ints), 0)
    return tuple(c // common for c in ints)


def _is_parallel(u: Sequence, v: Sequence) -> bool:
    if len(u) == 2:
        return u[0] * v[1] - u[1] * v[0] == 0
    return all(c == 0 for c in _cross(u, v))


def affine_dimension(points: Sequence[Sequence]) -> int:
    pts = [tuple(as_rational(c) for c in p) for p in points]
    if len(pts) <= 1:
        return 0
    rows = [[sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in _sub(p, pts[0])]
            for p in pts[1:]]
    return sympy.Matrix(rows).rank()


# ---- 二维凸包 ----

def _hull_2d(points: Iterable[Point]) -> List[Point]:
    """单调链算法，逆时针返回顶点（不含共线点），从字典序最小点开始"""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def lower_hull_2d(points: Iterable[Sequence]) -> List[Point]:
    """下凸包：从最左到最右的下边界顶点

    每个横坐标只保留纵坐标最小的点，共线的中间点被去掉
    """
    lowest: Dict[Number, Number] = {}
    for p in points:
        u, v = as_rational(p[0]), as_rational(p[1])
        if u not in lowest or v < lowest[u]:
            lowest[u] = v
    chain: List[Point] = []
    for p in sorted(lowest.items()):
        while len(chain) >= 2 and _cross2(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    return chain


# ---- 三维凸包 ----

def _initial_simplex(pts: List[Point]) -> List[int]:
    """依次找出仿射无关的点，返回其下标（最多 4 个）"""
    chosen = [0]
    p0 = pts[0]
    for i, p in enumerate(pts):
        if p != p0:
            chosen.append(i)
            break
    if len(chosen) < 2:
        return chosen
    d1 = _sub(pts[chosen[1]], p0)
    for i, p in enumerate(pts):
        if any(c != 0 for c in _cross(d1, _sub(p, p0))):
            chosen.append(i)
            break
    if len(chosen) < 3:
        return chosen
    n = _cross(d1, _sub(pts[chosen[2]], p0))
    for i, p in enumerate(pts):
        if _dot(n, _sub(p, p0)) != 0:
            chosen.append(i)
            break
    return chosen


def _hull_3d_facets(pts: List[Point], simplex: List[int]) -> List[Tuple[Tuple[int, ...], Number]]:
    """增量（beneath-beyond）构造三角化边界，返回不同的支撑平面 (法向, 偏移)"""
    a, b, c, d = simplex
    centroid = tuple(sum(pts[i][k] for i in simplex) / Fraction(4) for k in range(3))

    def oriented(i, j, k):
        normal = _cross(_sub(pts[j], pts[i]), _sub(pts[k], pts[i]))
        if _dot(normal, _sub(centroid, pts[i])) > 0:
            return (i, k, j), tuple(-x for x in normal)
        return (i, j, k), normal

    faces = [oriented(*tri) for tri in ((a, b, c), (a, b, d), (a, c, d), (b, c, d))]
    for idx, p in enumerate(pts):
        if idx in simplex:
            continue
        visible = [f for f in faces if _dot(f[1], _sub(p, pts[f[0][0]])) > 0]
        if not visible:
            continue
        directed = set()
        for (i, j, k), _ in visible:
            directed.update({(i, j), (j, k), (k, i)})
        horizon = [(u, v) for (u, v) in directed if (v, u) not in directed]
        faces = [f for f in faces if f not in visible]
        for u, v in horizon:
            normal = _cross(_sub(pts[v], pts[u]), _sub(p, pts[u]))
            faces.append(((u, v, idx), normal))

    planes = {}
    for (i, _, _), normal in faces:
        key = primitive_vector(normal)
        planes[key] = _dot(key, pts[i])
    return sorted(planes.items())


def _planar_polygon(points: List[Point], normal: Sequence) -> List[Point]:
    """三维中共面点集的凸多边形顶点（循环顺序）"""
    drop = next(k for k, c in enumerate(normal) if c != 0)
    keep = [k for k in range(3) if k != drop]
    projected = {tuple(p[k] for k in keep): p for p in points}
    return [projected[q] for q in _hull_2d(projected)]


def classify_facet(normal: Sequence[int], axes: Sequence[str]) -> str:
    """在 (F, G, x) 坐标下给余维 1 的面分类"""
    if tuple(axes) != POLYTOPE_AXES:
        return OTHER
    nf, ng, nx = normal
    if nf == 0 and ng == 0:
        return FLOOR if nx < 0 else CEILING
    if nx == 0:
        return VERTICAL
    if nf != 0 and ng != 0:
        return SLANTED_PLANE
    return OTHER


def convex_hull(points: Sequence[Sequence], dim: int, axes: Optional[Sequence[str]] = None,
                source: Optional[FracPoly] = None) -> LatticePolytope:
    """
    精确凸包

    参数:
        points: 点列表（有理坐标）
        dim: 环境维数，2 或 3
        axes: 坐标轴对应的变量名，默认二维 (x, y)、三维 (F, G, x)

    返回:
        LatticePolytope，退化情形记录仿射维数
    """
    if dim not in (2, 3):
        raise ToolkitError(f"只支持二维或三维凸包: dim={dim}")
    if not points:
        raise ToolkitError("empty point set")
    pts = []
    for p in points:
        if len(p) != dim:
            raise ToolkitError(f"点的维数不一致: {tuple(p)}")
        pts.append(tuple(as_rational(c) for c in p))
    pts = sorted(set(pts))
    axes = tuple(axes) if axes else (POLYGON_AXES if dim == 2 else POLYTOPE_AXES)

    simplex = _initial_simplex(pts if dim == 3 else [p + (0,) for p in pts])
    affine_dim = len(simplex) - 1

    if affine_dim == 0:
        return LatticePolytope(dim, 0, axes, [pts[0]], [], [], source)

    if affine_dim == 1:
        direction = _sub(pts[simplex[1]], pts[0])
        ends = sorted([min(pts, key=lambda q: _dot(direction, q)), max(pts, key=lambda q: _dot(direction, q))])
        return LatticePolytope(dim, 1, axes, ends, [], [(0, 1)], source)

    if dim == 2:
        ring = _hull_2d(pts)
        size = len(ring)
        faces = []
        for i in range(size):
            u, v = ring[i], ring[(i + 1) % size]
            normal = primitive_vector((v[1] - u[1], u[0] - v[0]))
            faces.append(Face(1, (i, (i + 1) % size), normal, OTHER))
        edges = [tuple(sorted((i, (i + 1) % size))) for i in range(size)]
        return LatticePolytope(2, 2, axes, ring, faces, sorted(edges), source)

    if affine_dim == 2:
        p0 = pts[simplex[0]]
        normal = _cross(_sub(pts[simplex[1]], p0), _sub(pts[simplex[2]], p0))
        ring = _planar_polygon(pts, normal)
        vertices = sorted(ring)
        index = {v: i for i, v in enumerate(vertices)}
        size = len(ring)
        edges = sorted({tuple(sorted((index[ring[i]], index[ring[(i + 1) % size]]))) for i in range(size)})
        return LatticePolytope(3, 2, axes, vertices, [], edges, source)

    planes = _hull_3d_facets(pts, simplex)
    rings = []
    for normal, offset in planes:
        on_plane = [p for p in pts if _dot(normal, p) == offset]
        rings.append((normal, _planar_polygon(on_plane, normal)))
    vertices = sorted({p for _, ring in rings for p in ring})
    index = {v: i for i, v in enumerate(vertices)}
    faces = []
    edges = set()
    for normal, ring in rings:
        ids = tuple(index[p] for p in ring)
        faces.append(Face(2, ids, normal, classify_facet(normal, axes)))
        for i in range(len(ids)):
            edges.add(tuple(sorted((ids[i], ids[(i + 1) % len(ids)]))))
    logger.debug(f"三维凸包: {len(vertices)} 个顶点, {len(faces)} 个面")
    return LatticePolytope(3, 3, axes, vertices, faces, sorted(edges), source)


def newton_polygon(p: FracPoly, axes: Sequence[str] = POLYGON_AXES) -> LatticePolytope:
    """N(p) ⊂ 平面，默认坐标 (x, y)"""
    if p.is_zero():
        raise ToolkitError("Newton polygon of zero")
    points = [tuple(mono.exponent(a) for a in axes) for mono in p.support()]
    return convex_hull(points, 2, axes, source=p)


def newton_polytope(p: FracPoly, axes: Sequence[str] = POLYTOPE_AXES) -> LatticePolytope:
    """N(P) ⊂ 空间，默认坐标 (F, G, x)"""
    if p.is_zero():
        raise ToolkitError("Newton polytope of zero")
    points = [tuple(mono.exponent(a) for a in axes) for mono in p.support()]
    return convex_hull(points, 3, axes, source=p)


def polytope_edges(poly: LatticePolytope) -> List[Tuple[Point, Point]]:
    return [(poly.vertices[i], poly.vertices[j]) for i, j in poly.edges]


# ---- 面与权重 ----

def face_for_weight(poly: LatticePolytope, w: WeightVector) -> Face:
    """取内积 <w, ·> 最大的顶点组成的面"""
    vector = w.along(poly.axes)
    if all(c == 0 for c in vector):
        raise ToolkitError("zero weight vector")
    values = [_dot(vector, v) for v in poly.vertices]
    top = max(values)
    ids = tuple(i for i, value in enumerate(values) if value == top)
    for face in poly.faces:
        if set(face.vertex_ids) == set(ids):
            return face
    return Face(affine_dimension([poly.vertices[i] for i in ids]), ids, None, OTHER)


def weight_for_face(poly: LatticePolytope, face: Face) -> WeightVector:
    if face.normal is None or not poly.is_full_dimensional or face.dim != poly.dim - 1:
        raise ToolkitError("weight cone not one-dimensional")
    return WeightVector.of(**dict(zip(poly.axes, face.normal)))


def classify_edge(direction: Sequence[int]) -> str:
    """边方向 (F, G, x) 的分类：依次检查 FOG、FOx、GOx 平行，否则为斜边"""
    if len(direction) != 3 or all(c == 0 for c in direction):
        raise ToolkitError("zero edge direction")
    df, dg, dx = direction
    if dx == 0:
        return PARALLEL_FOG
    if dg == 0:
        return PARALLEL_FOX
    if df == 0:
        return PARALLEL_GOX
    return SLANTED


def face_kind(poly: LatticePolytope, face: Face) -> str:
    """顶点 / 线段 / 三角形 / 梯形 / 四边形 / 多边形"""
    count = len(face.vertex_ids)
    if count == 1:
        return "vertex"
    if count == 2 or face.dim == 1:
        return "segment"
    if count == 3:
        return "triangle"
    if count == 4:
        ring = poly.face_points(face)
        sides = [_sub(ring[(i + 1) % 4], ring[i]) for i in range(4)]
        if _is_parallel(sides[0], sides[2]) or _is_parallel(sides[1], sides[3]):
            return "trapezoid"
        return "quadrilateral"
    return f"polygon-{count}"


def _format_point(p: Sequence) -> str:
    return "(" + ",".join(format_rational(c) for c in p) + ")"


# ---- 二维判定 ----

@dataclass
class TrapezoidVerdict:
    passed: bool
    m: int
    n: int
    violations: List[str]
    bisectrix_edges: List[Tuple[Point, Point]]


def leading_vertex(f: FracPoly) -> Tuple[Number, Number]:
    """y 次数最大、其次 x 次数最大的支撑点 (m, n)"""
    if f.is_zero():
        raise ToolkitError("leading vertex of zero")
    mono = max(f.support(), key=lambda mu: (mu.y, mu.x))
    return mono.x, mono.y


def trapezoid_membership(f: FracPoly) -> TrapezoidVerdict:
    """
    检查 N(f) 是否落在以首顶点 (m, n) 为顶点、边平行于 y 轴和对角线的梯形中，
    并列出平行于对角线 (1,1) 的凸包边
    """
    if f.is_zero():
        raise ToolkitError("trapezoid check of zero polynomial")
    if set(f.variables()) - {"x", "y"}:
        raise ToolkitError(f"只接受 x, y 的多项式: {f}")
    m, n = leading_vertex(f)
    violations = []
    if m == 0:
        violations.append("m = 0")
    elif m < 0:
        violations.append("m < 0")
    if n <= m:
        violations.append("n > m violated")
    for mono in f.support():
        i, j = mono.x, mono.y
        if not (0 <= i <= m) or j - i > n - m:
            violations.append(f"monomial x^{format_rational(i)}*y^{format_rational(j)} outside trapezoid")

    polygon = newton_polygon(f)
    bisectrix = []
    for u, v in polytope_edges(polygon):
        if _is_parallel(_sub(v, u), (1, 1)):
            bisectrix.append((u, v))
    return TrapezoidVerdict(not violations, m, n, violations, bisectrix)


# ---- N(P) 的形状 ----

@dataclass
class ShapeAudit:
    checks: List[CheckResult]
    ceiling_kind: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class PhiAFace:
    face: Face
    rho: Number
    sigma: Number


def _axis_values(poly: LatticePolytope, point: Point) -> Dict[str, Number]:
    return dict(zip(poly.axes, point))


def derive_edge_e(poly: LatticePolytope) -> Optional[Tuple[Point, Point]]:
    """底面上 F 轴与 G 轴方向最远的顶点，即边 ℰ 的两个端点"""
    f_axis, g_axis = [], []
    for v in poly.vertices:
        c = _axis_values(poly, v)
        if c["x"] == 0 and c["G"] == 0 and c["F"] > 0:
            f_axis.append(v)
        if c["x"] == 0 and c["F"] == 0 and c["G"] > 0:
            g_axis.append(v)
    if not f_axis or not g_axis:
        return None
    return max(f_axis), max(g_axis)


def phi_a_face(poly: LatticePolytope, edge: Tuple[Sequence, Sequence]) -> Optional[PhiAFace]:
    """包含 ℰ 且 x 权重为正的面 Φ_a，权重归一化为 w(x) = 1"""
    if tuple(poly.axes) != POLYTOPE_AXES or not poly.is_full_dimensional:
        return None
    ids = {poly.vertex_index(edge[0]), poly.vertex_index(edge[1])}
    if None in ids:
        return None
    for face in poly.faces:
        nf, ng, nx = face.normal
        if nx > 0 and ids <= set(face.vertex_ids):
            return PhiAFace(face, Fraction(nf, nx), Fraction(ng, nx))
    return None


def shape_audit_polytope(poly: LatticePolytope, edge: Optional[Tuple[Sequence, Sequence]] = None) -> ShapeAudit:
    """
    N(P) 形状审计，各项独立报告：
    (a) 顶点都在 FOx 或 GOx 平面上；(b) x = 0 处恰有一个底面；
    (c) 没有斜边；(d) 非竖直非水平的面是三角形或含平行于 ℰ 的边的梯形；
    (e) 底面包含 ℰ 的两个端点
    """
    if poly.dim != 3 or not poly.is_full_dimensional:
        raise ToolkitError("degenerate polytope: shape audit needs a 3-dimensional N(P)")
    if tuple(poly.axes) != POLYTOPE_AXES:
        raise ToolkitError(f"shape audit needs axes (F, G, x), got {poly.axes}")

    checks = []

    off_planes = [v for v in poly.vertices if _axis_values(poly, v)["F"] != 0 and _axis_values(poly, v)["G"] != 0]
    checks.append(check("vertices_in_coordinate_planes", not off_planes,
                        ", ".join(_format_point(v) for v in off_planes)))

    floors = [f for f in poly.faces if f.classification == FLOOR]
    floor_ok = len(floors) == 1 and all(_axis_values(poly, p)["x"] == 0 for p in poly.face_points(floors[0]))
    ceiling = face_for_weight(poly, WeightVector.of(x=1))
    ceiling_kind = face_kind(poly, ceiling)
    floor_witness = f"floors={len(floors)}; ceiling={ceiling_kind}"
    if floors and not floor_ok:
        floor_witness += f"; floor at x={_axis_values(poly, poly.face_points(floors[0])[0])['x']}"
    checks.append(check("single_floor_and_ceiling", floor_ok, floor_witness))

    slanted = [(u, v) for u, v in polytope_edges(poly) if classify_edge(_sub(v, u)) == SLANTED]
    checks.append(check("no_slanted_edges", not slanted,
                        ", ".join(f"{_format_point(u)}-{_format_point(v)}" for u, v in slanted)))

    if edge is None:
        edge = derive_edge_e(poly)
    bad_faces = []
    for face in poly.faces:
        if face.classification in (FLOOR, CEILING, VERTICAL):
            continue
        kind = face_kind(poly, face)
        if kind == "triangle":
            continue
        if kind == "trapezoid" and edge is not None:
            direction = _sub(edge[1], edge[0])
            ring = poly.face_points(face)
            if any(_is_parallel(_sub(ring[(i + 1) % 4], ring[i]), direction) for i in range(4)):
                continue
        bad_faces.append(f"{kind} normal={face.normal}")
    checks.append(check("side_faces_triangles_or_trapezoids", not bad_faces, "; ".join(bad_faces)))

    if edge is None or not floors:
        checks.append(CheckResult("floor_contains_edge", FAIL, "edge endpoints not found on the floor"))
    else:
        ids = [poly.vertex_index(edge[0]), poly.vertex_index(edge[1])]
        on_floor = None not in ids and set(ids) <= set(floors[0].vertex_ids)
        is_edge = on_floor and tuple(sorted(ids)) in poly.edges
        checks.append(CheckResult("floor_contains_edge", PASS if is_edge else FAIL,
                                  f"{_format_point(edge[0])}-{_format_point(edge[1])}"))

    logger.info(f"N(P) 形状审计完成: {sum(c.passed for c in checks)}/{len(checks)} 项通过")
    return ShapeAudit(checks, ceiling_kind)


def polytope_to_dict(poly: LatticePolytope) -> dict:
    """凸包的 JSON 结构，有理数写成 "num/den" 字符串"""
    return {
        "dim": poly.dim,
        "affine_dim": poly.affine_dim,
        "axes": list(poly.axes),
        "vertices": [[format_rational(c) for c in v] for v in poly.vertices],
        "edges": [list(e) for e in poly.edges],
        "faces": [
            {
                "normal": list(face.normal) if face.normal else None,
                "vertex_ids": list(face.vertex_ids),
                "class": face.classification,
            }
            for face in poly.faces
        ],
    }
