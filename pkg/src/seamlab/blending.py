"""Gradient-domain machinery: Poisson compositing and harmonic region fill.

Both solve the same interior system: the 5-point Laplacian over the masked
pixels with Dirichlet data from the surrounding pixels. The guidance field
comes from forward differences with mirrored borders and the divergence is
assembled with the adjoint stencil, so at image borders the stencil degree
simply drops and discrete identities (constants in the kernel, exact
src == dst solutions) hold exactly. The SPD system is solved by plain
conjugate gradient, with a Gauss-Seidel option for tiny systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ConfigError, ConvergenceError, ShapeError
from .imops import check_binary, check_image, check_mask

_SHIFTS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True)
class SolverParams:
    tolerance: float = 1e-6
    max_iterations: int = 10_000
    method: str = "cg"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.method not in ("cg", "gauss-seidel"):
            raise ConfigError(f"unknown solver method {self.method!r}")


def laplacian(u: np.ndarray) -> np.ndarray:
    """Mirror-border 5-point Laplacian: sum over in-grid neighbors of (u_p - u_q)."""
    out = np.zeros_like(u, dtype=float)
    out[:-1] += u[:-1] - u[1:]
    out[1:] += u[1:] - u[:-1]
    out[:, :-1] += u[:, :-1] - u[:, 1:]
    out[:, 1:] += u[:, 1:] - u[:, :-1]
    return out


def _neighbor_slices(dy: int, dx: int, h: int, w: int):
    # Aligned views: center[sl_c] has an in-grid neighbor at center[sl_n].
    sl_c = (slice(max(dy, 0), h + min(dy, 0)), slice(max(dx, 0), w + min(dx, 0)))
    sl_n = (slice(max(-dy, 0), h + min(-dy, 0)), slice(max(-dx, 0), w + min(-dx, 0)))
    return sl_c, sl_n


def _assemble(inside: np.ndarray):
    """Interior matrix A and the per-direction boundary adjacency needed for b."""
    h, w = inside.shape
    n = int(inside.sum())
    ids = np.full((h, w), -1, dtype=np.int64)
    ids[inside] = np.arange(n)

    degree = np.zeros((h, w), dtype=float)
    rows = []
    cols = []
    boundary = []  # (interior ids, boundary pixel coordinates) per direction
    for dy, dx in _SHIFTS:
        sl_c, sl_n = _neighbor_slices(dy, dx, h, w)
        has_neighbor = np.zeros((h, w), dtype=bool)
        has_neighbor[sl_c] = True
        degree += inside * has_neighbor

        center_in = np.zeros((h, w), dtype=bool)
        center_in[sl_c] = inside[sl_c] & inside[sl_n]
        rows.append(ids[center_in])
        shifted_ids = np.full((h, w), -1, dtype=np.int64)
        shifted_ids[sl_c] = ids[sl_n]
        cols.append(shifted_ids[center_in])

        center_out = np.zeros((h, w), dtype=bool)
        center_out[sl_c] = inside[sl_c] & ~inside[sl_n]
        ny, nx = np.nonzero(center_out)
        boundary.append((ids[center_out], ny - dy, nx - dx))

    diag = sparse.coo_matrix(
        (degree[inside], (np.arange(n), np.arange(n))), shape=(n, n)
    )
    off = sparse.coo_matrix(
        (-np.ones(sum(r.size for r in rows)), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    return (diag + off).tocsr(), ids, boundary


def _cg(mat, b: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return np.zeros_like(b)
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    target = tol * norm_b
    for _ in range(max_iter):
        if np.sqrt(rs) <= target:
            return x
        ap = mat @ p
        alpha = rs / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
    if np.sqrt(rs) <= target:
        return x
    residual = float(np.sqrt(rs) / norm_b)
    raise ConvergenceError(
        f"conjugate gradient: relative residual {residual:.3e} after {max_iter} iterations",
        residual=residual,
    )


def _gauss_seidel(mat, b: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    # Row sweeps in plain python; only sensible for tiny systems.
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return np.zeros_like(b)
    csr = mat.tocsr()
    x = np.zeros_like(b)
    indptr, indices, data = csr.indptr, csr.indices, csr.data
    diag = csr.diagonal()
    for _ in range(max_iter):
        for i in range(b.size):
            lo, hi = indptr[i], indptr[i + 1]
            acc = b[i]
            for k in range(lo, hi):
                j = indices[k]
                if j != i:
                    acc -= data[k] * x[j]
            x[i] = acc / diag[i]
        residual = float(np.linalg.norm(b - csr @ x) / norm_b)
        if residual <= tol:
            return x
    raise ConvergenceError(
        f"gauss-seidel: relative residual {residual:.3e} after {max_iter} sweeps",
        residual=residual,
    )


def _solve_region(
    guidance: np.ndarray | None,
    dirichlet: np.ndarray,
    inside: np.ndarray,
    params: SolverParams,
) -> np.ndarray:
    """Interior solution values (one channel) for Delta u = Delta guidance on the
    inside pixels, u = dirichlet at the surrounding pixels."""
    mat, ids, boundary = _assemble(inside)
    n = ids.max() + 1
    b = np.zeros(n)
    if guidance is not None:
        b += laplacian(guidance)[inside]
    for interior_ids, ny, nx in boundary:
        np.add.at(b, interior_ids, dirichlet[ny, nx])
    solver = _cg if params.method == "cg" else _gauss_seidel
    return solver(mat, b, params.tolerance, params.max_iterations)


def _bbox(inside: np.ndarray):
    ys, xs = np.nonzero(inside)
    h, w = inside.shape
    return (
        max(int(ys.min()) - 1, 0),
        min(int(ys.max()) + 2, h),
        max(int(xs.min()) - 1, 0),
        min(int(xs.max()) + 2, w),
    )


def poisson_blend(
    src: np.ndarray,
    dst: np.ndarray,
    mask: np.ndarray,
    params: SolverParams | None = None,
) -> np.ndarray:
    """Gradient-domain composite: Laplacian of ``src`` inside the mask, ``dst``
    values at the boundary; outside the mask the output is ``dst`` bit-exactly.
    Solved values are clamped to [0, 1]."""
    params = params or SolverParams()
    check_image(src)
    check_image(dst)
    if src.shape != dst.shape:
        raise ShapeError(f"image shapes differ: {src.shape} vs {dst.shape}")
    check_mask(mask, like=dst)
    check_binary(mask)
    inside = mask > 0.5
    if not inside.any():
        return dst.copy()
    if inside.all():
        raise ValueError("mask must leave at least one outside pixel")
    y0, y1, x0, x1 = _bbox(inside)
    window = inside[y0:y1, x0:x1]
    out = dst.copy()
    for c in range(3):
        u = _solve_region(
            src[y0:y1, x0:x1, c], dst[y0:y1, x0:x1, c], window, params
        )
        channel = out[y0:y1, x0:x1, c]
        channel[window] = np.clip(u, 0.0, 1.0)
    return out


def harmonic_fill(
    img: np.ndarray,
    region: np.ndarray,
    params: SolverParams | None = None,
) -> np.ndarray:
    """Replace the region by the discrete-harmonic interpolant of its surrounding
    pixels (Laplace equation with Dirichlet boundary); elsewhere unchanged."""
    params = params or SolverParams()
    check_image(img)
    check_mask(region, like=img)
    check_binary(region)
    inside = region > 0.5
    if not inside.any():
        return img.copy()
    if inside.all():
        raise ValueError("region must leave at least one outside pixel")
    y0, y1, x0, x1 = _bbox(inside)
    window = inside[y0:y1, x0:x1]
    out = img.copy()
    for c in range(3):
        u = _solve_region(None, img[y0:y1, x0:x1, c], window, params)
        channel = out[y0:y1, x0:x1, c]
        channel[window] = np.clip(u, 0.0, 1.0)
    return out
