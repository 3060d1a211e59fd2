import type { PredictionView } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 360;
const HEIGHT = 160;
const PAD = 24;

/**
 * Render per-task CE and PT as two polylines over task index, x = task
 * number, y = predicted value. Returns a detached <svg> element.
 */
export function predictionChart(view: PredictionView): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.setAttribute("class", "prediction-chart");

  const n = view.series.length;
  const values = view.series.flatMap((p) => [p.ce, p.pt]);
  const top = Math.max(...values, 1e-9);
  const x = (i: number) => (n === 1 ? WIDTH / 2 : PAD + (i * (WIDTH - 2 * PAD)) / (n - 1));
  const y = (v: number) => HEIGHT - PAD - (Math.max(v, 0) / top) * (HEIGHT - 2 * PAD);

  const axis = document.createElementNS(SVG_NS, "line");
  axis.setAttribute("x1", String(PAD));
  axis.setAttribute("y1", String(HEIGHT - PAD));
  axis.setAttribute("x2", String(WIDTH - PAD));
  axis.setAttribute("y2", String(HEIGHT - PAD));
  axis.setAttribute("stroke", "#999");
  svg.appendChild(axis);

  const lines: Array<{ key: "ce" | "pt"; color: string }> = [
    { key: "ce", color: "#c0392b" },
    { key: "pt", color: "#2980b9" },
  ];
  for (const { key, color } of lines) {
    const poly = document.createElementNS(SVG_NS, "polyline");
    poly.setAttribute(
      "points",
      view.series.map((p, i) => `${x(i).toFixed(1)},${y(p[key]).toFixed(1)}`).join(" "),
    );
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", color);
    poly.setAttribute("stroke-width", "2");
    poly.setAttribute("data-series", key);
    svg.appendChild(poly);
  }
  return svg;
}
