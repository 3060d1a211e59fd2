import { describe, expect, it } from "vitest";
import { predictionChart } from "../src/chart";

describe("predictionChart", () => {
  it("draws one CE and one PT polyline with a point per task", () => {
    const view = {
      series: [
        { ce: 1.5, pt: 0.9 },
        { ce: 2.5, pt: 1.1 },
        { ce: 2.0, pt: 1.0 },
      ],
      cumulativeCe: 6.0,
    };
    const svg = predictionChart(view);
    const ce = svg.querySelector("polyline[data-series='ce']")!;
    const pt = svg.querySelector("polyline[data-series='pt']")!;
    expect(ce.getAttribute("points")!.split(" ")).toHaveLength(3);
    expect(pt.getAttribute("points")!.split(" ")).toHaveLength(3);
  });

  it("puts the larger value higher on the chart (smaller y)", () => {
    const view = {
      series: [
        { ce: 1.0, pt: 4.0 },
        { ce: 3.0, pt: 2.0 },
      ],
      cumulativeCe: 4.0,
    };
    const svg = predictionChart(view);
    const points = svg
      .querySelector("polyline[data-series='ce']")!
      .getAttribute("points")!
      .split(" ")
      .map((p) => Number(p.split(",")[1]));
    expect(points[1]).toBeLessThan(points[0]); // ce rises from 1 to 3
  });

  it("handles a single-task series without dividing by zero", () => {
    const svg = predictionChart({ series: [{ ce: 2.0, pt: 1.0 }], cumulativeCe: 2.0 });
    const points = svg.querySelector("polyline[data-series='ce']")!.getAttribute("points")!;
    expect(points).not.toContain("NaN");
  });
});
