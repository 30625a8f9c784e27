"""Minimal deterministic SVG writer: sorted attributes, fixed number formatting."""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        s = f"{x:.3f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s
    return str(x)


class Element:
    def __init__(self, tag: str, attrs: dict | None = None, children=(), text: str | None = None):
        self.tag = tag
        self.attrs = dict(attrs or {})
        self.children = list(children)
        self.text = text

    def add(self, child: "Element") -> "Element":
        self.children.append(child)
        return child

    def write(self, out: list[str], depth: int = 0) -> None:
        pad = "  " * depth
        attrs = "".join(f" {k}={quoteattr(fmt(v))}" for k, v in sorted(self.attrs.items()))
        if not self.children and self.text is None:
            out.append(f"{pad}<{self.tag}{attrs}/>\n")
            return
        if not self.children:
            out.append(f"{pad}<{self.tag}{attrs}>{escape(self.text)}</{self.tag}>\n")
            return
        out.append(f"{pad}<{self.tag}{attrs}>\n")
        if self.text is not None:
            out.append(f"{pad}  {escape(self.text)}\n")
        for c in self.children:
            c.write(out, depth + 1)
        out.append(f"{pad}</{self.tag}>\n")


def document(width: float, height: float, title: str) -> Element:
    root = Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "version": "1.1",
        "width": width,
        "height": height,
        "viewBox": f"0 0 {fmt(width)} {fmt(height)}",
    })
    root.add(Element("title", text=title))
    return root


def serialize(root: Element) -> bytes:
    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n']
    root.write(out)
    return "".join(out).encode("utf-8")


def points(xy) -> str:
    return " ".join(f"{fmt(float(x))},{fmt(float(y))}" for x, y in xy)


# -- colour ramps -----------------------------------------------------------------

def hex_color(rgb) -> str:
    return "#" + "".join(f"{int(round(c)):02x}" for c in rgb)


def _parse(h: str) -> tuple[int, int, int]:
    return tuple(int(h[i:i + 2], 16) for i in (1, 3, 5))


def lerp_color(a: str, b: str, t: float) -> str:
    ca, cb = _parse(a), _parse(b)
    return hex_color(x + (y - x) * t for x, y in zip(ca, cb))


# sequential ramp for heatmap magnitudes: pale yellow to deep red
HEAT_LOW, HEAT_HIGH = "#fff5d6", "#99000d"
