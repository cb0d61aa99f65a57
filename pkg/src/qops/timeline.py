"""Per-qubit gate timeline (SVG) from a context profile."""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .profiler import ContextProfile, gate_durations

LANE_H = 28
RECT_H = 20
LEFT = 48
TOP = 20
PLOT_W = 800
LABEL_MIN_W = 7.0  # px per character


def _num_lanes(p: ContextProfile, num_qubits=None):
    top = max((q for r in p.records for q in r.operands), default=-1)
    return max(top + 1, num_qubits or 0, 1)


def render_timeline(p: ContextProfile, num_qubits=None, width=PLOT_W) -> ET.Element:
    durs = gate_durations(p)
    total = sum(d for _, d in durs)
    lanes = _num_lanes(p, num_qubits)
    scale = width / total if total else 0.0
    height = TOP + lanes * LANE_H + 30
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                     width=str(LEFT + width + 20), height=str(height))
    axis = ET.SubElement(svg, "g", {"class": "axes"})
    for q in range(lanes):
        y = TOP + q * LANE_H + LANE_H / 2
        ET.SubElement(axis, "line", x1=str(LEFT), y1=f"{y:g}", x2=str(LEFT + width),
                      y2=f"{y:g}", stroke="#ccc")
        t = ET.SubElement(axis, "text", {"x": "4", "y": f"{y + 4:g}", "font-size": "12"})
        t.text = f"q{q}"
    y_axis = TOP + lanes * LANE_H + 4
    ET.SubElement(axis, "line", x1=str(LEFT), y1=str(y_axis), x2=str(LEFT + width),
                  y2=str(y_axis), stroke="black")
    end_label = ET.SubElement(axis, "text", x=str(LEFT + width), y=str(y_axis + 16))
    end_label.set("font-size", "11")
    end_label.set("text-anchor", "end")
    end_label.text = f"{total / 1000:.3f} us"
    start_label = ET.SubElement(axis, "text", x=str(LEFT), y=str(y_axis + 16))
    start_label.set("font-size", "11")
    start_label.text = "0 us"

    gates = ET.SubElement(svg, "g", {"class": "gates"})
    t0 = 0
    for (i, d), r in zip(durs, p.records):
        x = LEFT + t0 * scale
        w = d * scale
        lane = r.target
        y = TOP + lane * LANE_H + (LANE_H - RECT_H) / 2
        g = ET.SubElement(gates, "g")
        title = ET.SubElement(g, "title")
        title.text = (f"#{i} {r.label} q{','.join(map(str, r.operands))} "
                      f"start={t0 / 1000:.3f}us dur={d / 1000:.3f}us")
        ctl = r.control
        if ctl is not None:
            yc = TOP + ctl * LANE_H + LANE_H / 2
            yt = TOP + lane * LANE_H + LANE_H / 2
            ET.SubElement(g, "line", x1=f"{x + w / 2:g}", y1=f"{yc:g}", x2=f"{x + w / 2:g}",
                          y2=f"{yt:g}", stroke="#333")
        ET.SubElement(g, "rect", x=f"{x:g}", y=f"{y:g}", width=f"{w:g}", height=str(RECT_H),
                      fill="#7fa7d9", stroke="#1f4e8c")
        if w >= LABEL_MIN_W * len(r.label) + 4:
            lbl = ET.SubElement(g, "text", x=f"{x + w / 2:g}", y=f"{y + RECT_H - 6:g}")
            lbl.set("font-size", "11")
            lbl.set("text-anchor", "middle")
            lbl.text = r.label
        t0 += d
    return svg


def timeline_svg(p: ContextProfile, num_qubits=None, width=PLOT_W) -> str:
    return ET.tostring(render_timeline(p, num_qubits, width), encoding="unicode")


def write_timeline(p: ContextProfile, path, num_qubits=None, width=PLOT_W):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(timeline_svg(p, num_qubits, width))
        fh.write("\n")
