"""2-D discrete curvelet transform via frequency wrapping.

The frequency plane is split into a lowpass square (coarse band), dyadic
coronae split into angular wedges (detail bands), and a non-directional
highpass residual (fine band, wavelet-style finest scale).  Each wedge is
wrapped onto a rectangle around the origin and inverse-FFT'd, which makes
the whole decomposition an exact Parseval frame: coefficient energy equals
image energy and the adjoint is the inverse.

All index geometry (wedge supports, wrapping maps, smooth windows) depends
only on the input shape and the transform configuration, so it is computed
once and cached in a plan that forward and inverse share.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as spfft

from ..errors import DomainError

_BandKey = tuple[int, int]


@dataclass(frozen=True)
class CurveletConfig:
    """Transform shape: number of scales and detail-scale orientations."""

    n_scales: int = 3
    n_angles_detail: int = 16

    def __post_init__(self):
        if self.n_scales < 2:
            raise DomainError("n_scales must be >= 2")
        if self.n_angles_detail % 4 != 0 or self.n_angles_detail < 8:
            raise DomainError("n_angles_detail must be a multiple of 4, >= 8")

    def angles_per_scale(self) -> list[int]:
        """Band count per scale: 1 coarse, doubling detail wedges, 1 fine."""
        counts = [1]
        for j in range(1, self.n_scales):
            counts.append(self.n_angles_detail * 2 ** int(np.ceil((j - 1) / 2)))
        counts[self.n_scales - 1] = 1
        return counts


@dataclass
class CurveletCoeffs:
    """Coefficient bands keyed by (scale, angle).

    Scale 0 is the coarse band, scales 1..n_scales-2 are directional detail
    scales, scale n_scales-1 is the fine (wavelet) band.
    """

    bands: dict[_BandKey, np.ndarray]
    source_dims: tuple[int, int]
    config: CurveletConfig

    def copy(self) -> "CurveletCoeffs":
        return CurveletCoeffs(
            {k: v.copy() for k, v in self.bands.items()}, self.source_dims, self.config
        )

    def energy(self) -> float:
        return float(sum(np.sum(np.abs(b) ** 2) for b in self.bands.values()))

    def detail_keys(self, scale: int = 1) -> list[_BandKey]:
        return sorted(k for k in self.bands if k[0] == scale)


def band_summary(coeffs: CurveletCoeffs) -> dict:
    """JSON-ready dump of band shapes and energies, for inspection."""
    return {
        f"{j},{l}": {
            "shape": list(b.shape),
            "energy": float(np.sum(np.abs(b) ** 2)),
        }
        for (j, l), b in sorted(coeffs.bands.items())
    }


def _half_windows(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Left/right halves of the C-infinity step with wl^2 + wr^2 = 1."""
    x = np.array(x, dtype=np.float64, copy=True)
    x[np.abs(x) < 2.0**-52] = 0.0
    wl = np.zeros_like(x)
    wr = np.zeros_like(x)
    inside = (x > 0) & (x < 1)
    with np.errstate(over="ignore", divide="ignore"):
        wr[inside] = np.exp(1 - 1 / (1 - np.exp(1 - 1 / x[inside])))
        wl[inside] = np.exp(1 - 1 / (1 - np.exp(1 - 1 / (1 - x[inside]))))
    wr[x <= 0] = 1.0
    wl[x >= 1] = 1.0
    norm = np.sqrt(wl**2 + wr**2)
    return wl / norm, wr / norm


def _lowpass_1d(m: float) -> np.ndarray:
    """1-D lowpass profile [wl | ones(2*floor(m)+1) | wr] for cutoff m."""
    n_win = int(np.floor(2 * m)) - int(np.floor(m))
    coords = np.linspace(0.0, 1.0, n_win)
    wl, wr = _half_windows(coords)
    return np.concatenate([wl, np.ones(2 * int(np.floor(m)) + 1), wr])


def _lowpass_2d(m1: float, m2: float) -> tuple[np.ndarray, np.ndarray]:
    lp = np.outer(_lowpass_1d(m1), _lowpass_1d(m2))
    hp = np.sqrt(np.maximum(0.0, 1.0 - lp**2))
    return lp, hp


@dataclass
class _Wedge:
    quadrant: int
    shape: tuple[int, int]        # wrapped (rows, cols) before the quadrant rotation
    gather: np.ndarray            # flat indices into the scale box, wrapped order
    fwd_weight: np.ndarray        # window * admissibility mask
    inv_weight: np.ndarray        # window * duplicate-resolution mask
    orientation: float            # center direction in the frequency plane, radians


@dataclass
class _DetailScale:
    scale: int
    box: tuple[int, int]          # highpass box carrying this scale's corona
    sub1: np.ndarray              # center block rows (next-coarser region)
    sub2: np.ndarray
    lowpass: np.ndarray           # window pair for the center block
    hipass: np.ndarray
    wedges: list[_Wedge] = field(default_factory=list)


@dataclass
class _Plan:
    dims: tuple[int, int]
    config: CurveletConfig
    lo1: np.ndarray               # finest-scale lowpass block inside the full spectrum
    lo2: np.ndarray
    lowpass_finest: np.ndarray
    hipass_finest: np.ndarray
    details: list[_DetailScale]   # ordered fine -> coarse as processed
    coarse_shape: tuple[int, int]


def _wedge_rows_cols(left_line, first_col, width):
    """1-based periodic column layout for every row of a wedge."""
    offs = np.arange(width)
    return left_line[:, None] + np.mod(offs[None, :] - (left_line[:, None] - first_col), width)


def _resolve_duplicates(gather: np.ndarray, last_wins: bool) -> np.ndarray:
    """Mask keeping exactly one contribution per duplicated target cell.

    The wrapping maps fold corner wedges, so a few cells are addressed twice
    within a row.  The reference construction resolves them by assignment
    order; accumulating with losers zeroed reproduces that exactly while
    staying order-independent.
    """
    flat = gather.ravel()
    keep = np.ones(flat.size, dtype=np.float64)
    seen: set[int] = set()
    order = range(flat.size - 1, -1, -1) if last_wins else range(flat.size)
    for i in order:
        v = int(flat[i])
        if v in seen:
            keep[i] = 0.0
        else:
            seen.add(v)
    return keep.reshape(gather.shape)


def _build_wedges(scale_idx, m1, m2, box, n_angles) -> list[_Wedge]:
    b1, b2 = box
    idx = np.arange(b1 * b2, dtype=np.int64).reshape(b1, b2)
    per_quad = n_angles // 4
    wedges: list[_Wedge] = []

    for quadrant in (1, 2, 3, 4):
        mh, mv = (m2, m1) if quadrant % 2 == 1 else (m1, m2)
        fl4h = int(np.floor(4 * mh))
        fl4v = int(np.floor(4 * mv))
        flv = int(np.floor(mv))
        idx_rot = np.rot90(idx, quadrant - 1)

        ticks_left = np.round(np.linspace(0, 1, per_quad + 1) * fl4h + 1).astype(int)
        ticks_right = 2 * fl4h + 2 - ticks_left
        if per_quad % 2:
            ticks = np.concatenate([ticks_left, ticks_right[::-1]])
        else:
            ticks = np.concatenate([ticks_left, ticks_right[-2::-1]])
        endpoints = ticks[1:-1:2].astype(float)
        midpoints = (endpoints[:-1] + endpoints[1:]) / 2.0

        fwev = int(np.round(fl4v / per_quad + 1))
        len_corner = fl4v - flv + int(np.ceil(fwev / 4))
        rows_corner = np.arange(1, len_corner + 1)

        def wrap(rows, left_line, first_col, first_row, width, fold):
            """Gather map, wrapped coordinates and fold mask for one wedge."""
            length = rows.size
            cols = _wedge_rows_cols(left_line, first_col, width)
            if fold == "left":
                adm = np.round(0.5 * (cols + 1 + np.abs(cols - 1))).astype(int)
                mask = (cols > 0).astype(np.float64)
            elif fold == "right":
                lim = 2 * fl4h + 1
                adm = np.round(0.5 * (cols + lim - np.abs(cols - lim))).astype(int)
                mask = (cols <= lim).astype(np.float64)
            else:
                adm = cols.astype(int)
                mask = np.ones_like(cols, dtype=np.float64)
            gather = np.empty((length, width), dtype=np.int64)
            xx = np.empty((length, width), dtype=np.int64)
            yy = np.empty((length, width), dtype=np.int64)
            msk = np.empty((length, width), dtype=np.float64)
            for i, r in enumerate(rows):
                nr = (r - first_row) % length
                gather[nr, :] = idx_rot[r - 1, adm[i] - 1]
                xx[nr, :] = adm[i]
                yy[nr, :] = r
                msk[nr, :] = mask[i]
            return gather, xx, yy, msk

        def first_rc(length, width):
            fr = fl4v + 2 - int(np.ceil((length + 1) / 2)) + (
                (length + 1) % 2
            ) * int(quadrant - 2 == quadrant % 2)
            fc = fl4h + 2 - int(np.ceil((width + 1) / 2)) + (
                (width + 1) % 2
            ) * int(quadrant - 3 == (quadrant - 3) % 2)
            return fr, fc

        def edge_coord(xx, yy, end_lo, end_hi, midpoint):
            slope = (fl4h + 1 - midpoint) / fl4v
            mid_line = midpoint + slope * (yy - 1)
            return 0.5 + fl4v / (end_hi - end_lo) * (xx - mid_line) / (fl4v + 1 - yy)

        def orientation(xx, yy, window):
            """Energy-weighted center direction of the wedge in frequency."""
            w2 = window**2
            cg_col = float(np.sum(w2 * xx) / np.sum(w2)) - (fl4h + 1)
            cg_row = float(np.sum(w2 * yy) / np.sum(w2)) - (fl4v + 1)
            # Fractions of the box half-sizes, un-rotated into the common frame.
            fc, fr = cg_col / fl4h, cg_row / fl4v
            for _ in range(quadrant - 1):
                fc, fr = -fr, fc
            return float(np.arctan2(fr, fc))

        # Left corner wedge.
        width = int(endpoints[1] + endpoints[0] - 1)
        fr, fc = first_rc(len_corner, width)
        slope = (fl4h + 1 - endpoints[0]) / fl4v
        left_line = np.round(2 - endpoints[0] + slope * (rows_corner - 1)).astype(int)
        gather, xx, yy, mask = wrap(rows_corner, left_line, fc, fr, width, "left")
        coord_r = edge_coord(xx, yy, endpoints[0], endpoints[1], midpoints[0])
        c2 = 1.0 / (
            1.0 / (2 * fl4h / (endpoints[0] - 1) - 1)
            + 1.0 / (2 * fl4v / (fwev - 1) - 1)
        )
        c1 = c2 / (2 * fl4v / (fwev - 1) - 1)
        xxa = xx.astype(np.float64)
        xxa[(xx - 1) / fl4h + (yy - 1) / fl4v == 2] += 1
        with np.errstate(invalid="ignore", divide="ignore"):
            coord_c = c1 + c2 * ((xxa - 1) / fl4h - (yy - 1) / fl4v) / (
                2 - ((xxa - 1) / fl4h + (yy - 1) / fl4v)
            )
        wl, _ = _half_windows(coord_c)
        _, wr = _half_windows(coord_r)
        window = wl * wr
        wedges.append(
            _Wedge(
                quadrant,
                gather.shape,
                gather,
                window * mask,
                window * _resolve_duplicates(gather, last_wins=True),
                orientation(xx, yy, window),
            )
        )

        # Regular wedges.
        len_reg = fl4v - flv
        rows_reg = np.arange(1, len_reg + 1)
        for si in range(1, per_quad - 1):
            width = int(endpoints[si + 1] - endpoints[si - 1] + 1)
            fr, fc = first_rc(len_reg, width)
            slope = (fl4h + 1 - endpoints[si]) / fl4v
            left_line = np.round(endpoints[si - 1] + slope * (rows_reg - 1)).astype(int)
            gather, xx, yy, mask = wrap(rows_reg, left_line, fc, fr, width, "none")
            coord_l = edge_coord(xx, yy, endpoints[si - 1], endpoints[si], midpoints[si - 1])
            coord_r = edge_coord(xx, yy, endpoints[si], endpoints[si + 1], midpoints[si])
            wl, _ = _half_windows(coord_l)
            _, wr = _half_windows(coord_r)
            window = wl * wr
            wedges.append(
                _Wedge(
                    quadrant,
                    gather.shape,
                    gather,
                    window,
                    window,
                    orientation(xx, yy, window),
                )
            )

        # Right corner wedge.
        width = int(4 * fl4h + 3 - endpoints[-1] - endpoints[-2])
        fr, fc = first_rc(len_corner, width)
        slope = (fl4h + 1 - endpoints[-1]) / fl4v
        left_line = np.round(endpoints[-2] + slope * (rows_corner - 1)).astype(int)
        gather, xx, yy, mask = wrap(rows_corner, left_line, fc, fr, width, "right")
        coord_l = edge_coord(xx, yy, endpoints[-2], endpoints[-1], midpoints[-1])
        c2 = -1.0 / (
            2 * fl4h / (endpoints[-1] - 1)
            - 1
            + 1.0 / (2 * fl4v / (fwev - 1) - 1)
        )
        c1 = -c2 * (2 * fl4h / (endpoints[-1] - 1) - 1)
        xxa = xx.astype(np.float64)
        xxa[(xx - 1) / fl4h == (yy - 1) / fl4v] -= 1
        with np.errstate(invalid="ignore", divide="ignore"):
            coord_c = c1 + c2 * (2 - ((xxa - 1) / fl4h + (yy - 1) / fl4v)) / (
                (xxa - 1) / fl4h - (yy - 1) / fl4v
            )
        wl, _ = _half_windows(coord_l)
        _, wr = _half_windows(coord_c)
        window = wl * wr
        wedges.append(
            _Wedge(
                quadrant,
                gather.shape,
                gather,
                window * mask,
                window * _resolve_duplicates(gather[:, ::-1], last_wins=True)[:, ::-1],
                orientation(xx, yy, window),
            )
        )

    return wedges


def _build_plan(n1: int, n2: int, config: CurveletConfig) -> _Plan:
    if min(n1, n2) < 32:
        raise DomainError(f"input dims {(n1, n2)} too small; need at least 32x32")
    m_last = min(n1, n2) / 3.0 / 2 ** (config.n_scales - 1)
    if int(np.floor(4 * m_last)) < 2 * (config.n_angles_detail // 4) or int(np.floor(m_last)) < 1:
        raise DomainError(
            f"input dims {(n1, n2)} too small for {config.n_scales} scales"
        )

    m1, m2 = n1 / 6.0, n2 / 6.0
    lowpass_finest, hipass_finest = _lowpass_2d(m1, m2)
    lo1 = np.arange(-int(np.floor(2 * m1)), int(np.floor(2 * m1)) + 1) + int(
        np.ceil((n1 + 1) / 2)
    ) - 1
    lo2 = np.arange(-int(np.floor(2 * m2)), int(np.floor(2 * m2)) + 1) + int(
        np.ceil((n2 + 1) / 2)
    ) - 1

    angles = config.angles_per_scale()
    details: list[_DetailScale] = []
    for j in range(config.n_scales - 2, 0, -1):
        box = (2 * int(np.floor(2 * m1)) + 1, 2 * int(np.floor(2 * m2)) + 1)
        m1, m2 = m1 / 2.0, m2 / 2.0
        lp, hp = _lowpass_2d(m1, m2)
        sub1 = np.arange(-int(np.floor(2 * m1)), int(np.floor(2 * m1)) + 1) + int(
            np.floor(4 * m1)
        )
        sub2 = np.arange(-int(np.floor(2 * m2)), int(np.floor(2 * m2)) + 1) + int(
            np.floor(4 * m2)
        )
        details.append(
            _DetailScale(
                scale=j,
                box=box,
                sub1=sub1,
                sub2=sub2,
                lowpass=lp,
                hipass=hp,
                wedges=_build_wedges(j, m1, m2, box, angles[j]),
            )
        )
    coarse_shape = (2 * int(np.floor(2 * m1)) + 1, 2 * int(np.floor(2 * m2)) + 1)
    return _Plan(
        dims=(n1, n2),
        config=config,
        lo1=lo1,
        lo2=lo2,
        lowpass_finest=lowpass_finest,
        hipass_finest=hipass_finest,
        details=details,
        coarse_shape=coarse_shape,
    )


_PLAN_CACHE: dict[tuple, _Plan] = {}
_PLAN_LOCK = threading.Lock()


def get_plan(dims: tuple[int, int], config: CurveletConfig) -> _Plan:
    key = (dims, config.n_scales, config.n_angles_detail)
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        with _PLAN_LOCK:
            plan = _PLAN_CACHE.get(key)
            if plan is None:
                plan = _build_plan(dims[0], dims[1], config)
                _PLAN_CACHE[key] = plan
    return plan


def _spectrum(x: np.ndarray) -> np.ndarray:
    return spfft.fftshift(spfft.fft2(spfft.ifftshift(x), norm="ortho"))


def _image(spec: np.ndarray) -> np.ndarray:
    return spfft.fftshift(spfft.ifft2(spfft.ifftshift(spec), norm="ortho"))


def forward(data: np.ndarray, config: CurveletConfig | None = None) -> CurveletCoeffs:
    """Decompose a real or complex 2-D array into curvelet bands."""
    config = config or CurveletConfig()
    data = np.asarray(data)
    if data.ndim != 2:
        raise DomainError("forward expects a 2-D array")
    if not np.all(np.isfinite(data)):
        raise DomainError("forward expects finite input")
    n1, n2 = data.shape
    plan = get_plan((n1, n2), config)

    spec = _spectrum(data.astype(np.complex128))
    bands: dict[_BandKey, np.ndarray] = {}

    # Fine band: highpass residual over the whole spectrum.
    lowpass_block = spec[np.ix_(plan.lo1, plan.lo2)] * plan.lowpass_finest
    hi = spec.copy()
    hi[np.ix_(plan.lo1, plan.lo2)] *= plan.hipass_finest
    bands[(config.n_scales - 1, 0)] = _image(hi)

    x_low = lowpass_block
    for det in plan.details:
        x_hi = x_low.copy()
        center = x_hi[np.ix_(det.sub1, det.sub2)]
        x_hi[np.ix_(det.sub1, det.sub2)] = center * det.hipass
        x_low = center * det.lowpass
        flat = x_hi.ravel()
        for l, w in enumerate(det.wedges):
            wrapped = flat[w.gather] * w.fwd_weight
            wrapped = np.rot90(wrapped, -(w.quadrant - 1))
            bands[(det.scale, l)] = _image(wrapped)

    bands[(0, 0)] = _image(x_low)
    return CurveletCoeffs(bands=bands, source_dims=(n1, n2), config=config)


def inverse(coeffs: CurveletCoeffs) -> np.ndarray:
    """Reconstruct the image from its bands (exact inverse of `forward`)."""
    config = coeffs.config
    n1, n2 = coeffs.source_dims
    plan = get_plan((n1, n2), config)
    angles = config.angles_per_scale()
    for j, count in enumerate(angles):
        for l in range(count):
            if (j, l) not in coeffs.bands:
                raise DomainError(f"missing band {(j, l)}")

    fine = coeffs.bands[(config.n_scales - 1, 0)]
    if fine.shape != (n1, n2):
        raise DomainError("fine band shape does not match source dims")

    accum = np.zeros(
        (plan.lowpass_finest.shape[0], plan.lowpass_finest.shape[1]),
        dtype=np.complex128,
    )
    top1 = top2 = 0
    lowpass_prev = plan.lowpass_finest
    for det in plan.details:
        xj = np.zeros(det.box, dtype=np.complex128)
        xj_flat = xj.ravel()
        for l, w in enumerate(det.wedges):
            band = coeffs.bands[(det.scale, l)]
            expect = w.shape if w.quadrant % 2 == 1 else w.shape[::-1]
            if band.shape != expect:
                raise DomainError(f"band {(det.scale, l)} has wrong shape")
            wrapped = _spectrum(band)
            wrapped = np.rot90(wrapped, w.quadrant - 1) * w.inv_weight
            np.add.at(xj_flat, w.gather.ravel(), wrapped.ravel())
        xj = xj_flat.reshape(det.box)
        xj *= lowpass_prev
        xj[np.ix_(det.sub1, det.sub2)] *= det.hipass
        s1, s2 = xj.shape
        accum[top1 : top1 + s1, top2 : top2 + s2] += xj
        # Next-coarser box sits centered inside this one.
        top1 += (det.box[0] - det.lowpass.shape[0]) // 2
        top2 += (det.box[1] - det.lowpass.shape[1]) // 2
        lowpass_prev = det.lowpass

    coarse = coeffs.bands[(0, 0)]
    if coarse.shape != plan.coarse_shape:
        raise DomainError("coarse band shape mismatch")
    spec_c = _spectrum(coarse)
    accum[top1 : top1 + spec_c.shape[0], top2 : top2 + spec_c.shape[1]] += (
        spec_c * lowpass_prev
    )

    spec = _spectrum(fine)
    block = spec[np.ix_(plan.lo1, plan.lo2)]
    spec[np.ix_(plan.lo1, plan.lo2)] = block * plan.hipass_finest + accum
    out = _image(spec)
    return out
