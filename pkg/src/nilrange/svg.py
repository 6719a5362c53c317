"""Self-contained SVG rendering of numerical range boundaries."""

import numpy as np

SIZE = 800
MARGIN = 0.05


class Canvas:
    """Maps complex points to an 800x800 viewport with equal aspect and 5% margin."""

    def __init__(self, points):
        z = np.asarray(list(points), dtype=np.complex128)
        xmin, xmax = z.real.min(), z.real.max()
        ymin, ymax = z.imag.min(), z.imag.max()
        span = max(xmax - xmin, ymax - ymin, 1e-12)
        self.cx, self.cy = (xmin + xmax) / 2, (ymin + ymax) / 2
        self.scale = SIZE * (1 - 2 * MARGIN) / span
        self.span = span

    def xy(self, z):
        return (
            SIZE / 2 + (z.real - self.cx) * self.scale,
            SIZE / 2 - (z.imag - self.cy) * self.scale,
        )

    def path(self, pts, closed=False):
        coords = [self.xy(z) for z in pts]
        d = "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in coords)
        return d + (" Z" if closed else "")


def render(boundary, flats=(), lines=(), overlays=(), title=None):
    """SVG document for a boundary polygon.

    Parameters
    ----------
    boundary : sequence of complex
        Boundary samples, drawn as a closed polyline.
    flats : sequence of (complex, complex)
        Segments drawn emphasized.
    lines : sequence of SupportLine
        Optional supporting lines, clipped to the view.
    overlays : sequence of (sequence of complex, bool)
        Extra curves with a flag telling whether to close them.
    """
    pts = list(boundary)
    extent = pts + [z for seg in flats for z in seg]
    for curve, _ in overlays:
        extent += list(curve)
    cv = Canvas(extent)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" style="fill:#ffffff"/>',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    # axes through the origin when visible
    ox, oy = cv.xy(0j)
    if 0 <= ox <= SIZE:
        out.append(f'<line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{SIZE}" style="stroke:#cccccc;stroke-width:1"/>')
    if 0 <= oy <= SIZE:
        out.append(f'<line x1="0" y1="{oy:.3f}" x2="{SIZE}" y2="{oy:.3f}" style="stroke:#cccccc;stroke-width:1"/>')
    for curve, closed in overlays:
        out.append(
            f'<path d="{cv.path(curve, closed)}" '
            'style="fill:none;stroke:#d08020;stroke-width:1.5;stroke-dasharray:6 4"/>'
        )
    for ln in lines:
        p0 = np.exp(1j * ln.theta) * ln.d
        half = cv.span
        a, b = p0 - half * ln.direction, p0 + half * ln.direction
        out.append(f'<path d="{cv.path([a, b])}" style="fill:none;stroke:#8888ff;stroke-width:1"/>')
    out.append(f'<path d="{cv.path(pts, True)}" style="fill:#e8eef8;stroke:#203060;stroke-width:2"/>')
    for z1, z2 in flats:
        out.append(f'<path d="{cv.path([z1, z2])}" style="fill:none;stroke:#c02020;stroke-width:5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
