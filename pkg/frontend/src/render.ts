/**
 * Headless figure rendering: sweep CSV in, SVG (or PNG) out.
 *
 * Rendering is server-side via the chart engine's SSR mode, so no
 * browser or canvas binding is needed for SVG.  PNG output works when
 * the optional `sharp` rasterizer is installed; otherwise the renderer
 * says so and asks for an .svg path.
 */

import { readFileSync, writeFileSync } from "node:fs";
import * as echarts from "echarts";

import { heatmapOption, powerOption } from "./charts";
import { parseSweepCsv } from "./schema";

export type FigureKind = "heatmap" | "power";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  width?: number;
  height?: number;
}

const DEFAULT_SIZE: Record<FigureKind, { width: number; height: number }> = {
  heatmap: { width: 640, height: 520 },
  power: { width: 640, height: 760 },
};

export function renderSvg(spec: FigureSpec): string {
  const rows = parseSweepCsv(readFileSync(spec.input, "utf-8"));
  const option = spec.kind === "heatmap" ? heatmapOption(rows) : powerOption(rows);
  const { width, height } = { ...DEFAULT_SIZE[spec.kind], ...spec };
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

export async function render(spec: FigureSpec): Promise<void> {
  const svg = renderSvg(spec);
  if (/\.png$/i.test(spec.output)) {
    let sharp: typeof import("sharp");
    try {
      sharp = (await import("sharp")).default as never;
    } catch {
      throw new Error(
        "png output needs the optional 'sharp' package; install it or write an .svg path",
      );
    }
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    writeFileSync(spec.output, png);
    return;
  }
  writeFileSync(spec.output, svg, "utf-8");
}
