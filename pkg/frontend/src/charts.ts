/**
 * Chart option builders for the two figure kinds.
 *
 * Heatmap: rectification efficiency over (detuning, phase/2pi), color
 * scale pinned to [0, 1] so figures from different runs compare
 * directly.  Power curves: three stacked panels sharing a log flux
 * axis — efficiency and the two transmittances, then the excitation
 * probabilities for each input direction.
 */

import type { EChartsOption } from "echarts";

import { axisValues, SweepRow } from "./schema";

const TWO_PI = 2 * Math.PI;

function round(x: number, digits = 6): number {
  return Number(x.toPrecision(digits));
}

export function heatmapOption(rows: SweepRow[]): EChartsOption {
  const deltas = axisValues(rows, "delta");
  const thetas = axisValues(rows, "theta");
  if (deltas.length < 2 || thetas.length < 2) {
    throw new Error(
      `heatmap needs a 2D grid, got ${deltas.length} detuning x ${thetas.length} phase values`,
    );
  }
  const deltaIndex = new Map(deltas.map((v, i) => [v, i]));
  const thetaIndex = new Map(thetas.map((v, i) => [v, i]));
  const cells: [number, number, number][] = [];
  for (const row of rows) {
    if (!Number.isFinite(row.L)) continue;
    cells.push([deltaIndex.get(row.delta)!, thetaIndex.get(row.theta)!, row.L]);
  }
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: "Rectification efficiency", left: "center" },
    grid: { left: 70, right: 90, top: 50, bottom: 55 },
    xAxis: {
      type: "category",
      name: "detuning of the left atom",
      nameLocation: "middle",
      nameGap: 28,
      data: deltas.map((v) => String(round(v))),
    },
    yAxis: {
      type: "category",
      name: "phase / 2π",
      nameLocation: "middle",
      nameGap: 45,
      data: thetas.map((v) => String(round(v / TWO_PI, 4))),
    },
    visualMap: {
      min: 0,
      max: 1,
      right: 10,
      top: "center",
      calculable: false,
      inRange: {
        color: ["#10144d", "#3b4cc0", "#7da0f9", "#f6f6f6", "#f4a582", "#cc2d2d"],
      },
    },
    series: [{ type: "heatmap", data: cells, progressive: 0 }],
  };
}

function panelSeries(
  rows: SweepRow[],
  column: keyof SweepRow,
  name: string,
  axisIndex: number,
  style: { color: string; dashed?: boolean },
) {
  const data = rows
    .filter((r) => Number.isFinite(r[column]))
    .map((r) => [r.flux, r[column]]);
  return {
    type: "line" as const,
    name,
    xAxisIndex: axisIndex,
    yAxisIndex: axisIndex,
    showSymbol: false,
    data,
    lineStyle: {
      width: 2,
      color: style.color,
      type: style.dashed ? ("dashed" as const) : ("solid" as const),
    },
    itemStyle: { color: style.color },
  };
}

export function powerOption(rows: SweepRow[]): EChartsOption {
  const fluxes = axisValues(rows, "flux");
  if (fluxes.length < 2) {
    throw new Error(`power curves need a flux axis, got ${fluxes.length} value(s)`);
  }
  const panels = [
    { top: "6%", height: "22%" },
    { top: "40%", height: "22%" },
    { top: "74%", height: "22%" },
  ];
  const titles = [
    "efficiency and transmittances",
    "excitation, input from the left",
    "excitation, input from the right",
  ];
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: titles.map((text, i) => ({
      text,
      left: "center",
      top: `${[0, 34, 68][i]}%`,
      textStyle: { fontSize: 13 },
    })),
    grid: panels.map((p) => ({ left: 75, right: 30, ...p })),
    legend: [
      { top: "3%", right: 40, data: ["L", "T_fwd", "T_bwd"] },
      { top: "37%", right: 40, data: ["P1", "P2", "P12"] },
      { top: "71%", right: 40, data: ["P1 ", "P2 ", "P12 "] },
    ],
    xAxis: panels.map((_, i) => ({
      gridIndex: i,
      type: "log" as const,
      name: i === 2 ? "photons per lifetime" : "",
      nameLocation: "middle" as const,
      nameGap: 26,
      min: fluxes[0],
      max: fluxes[fluxes.length - 1],
    })),
    yAxis: panels.map((_, i) => ({ gridIndex: i, min: 0, max: 1 })),
    series: [
      panelSeries(rows, "L", "L", 0, { color: "#111111" }),
      panelSeries(rows, "T_fwd", "T_fwd", 0, { color: "#2a9d3c", dashed: true }),
      panelSeries(rows, "T_bwd", "T_bwd", 0, { color: "#d62728", dashed: true }),
      panelSeries(rows, "P1_L", "P1", 1, { color: "#1f77b4", dashed: true }),
      panelSeries(rows, "P2_L", "P2", 1, { color: "#ff7f0e" }),
      panelSeries(rows, "P12_L", "P12", 1, { color: "#111111", dashed: true }),
      panelSeries(rows, "P1_R", "P1 ", 2, { color: "#1f77b4", dashed: true }),
      panelSeries(rows, "P2_R", "P2 ", 2, { color: "#ff7f0e" }),
      panelSeries(rows, "P12_R", "P12 ", 2, { color: "#111111", dashed: true }),
    ],
  };
}
