import { mkdirSync, writeFileSync } from "node:fs";
import { createRequire } from "node:module";
import { dirname, join } from "node:path";

import fg from "fast-glob";

import { readTrajectory } from "./csv.js";
import { InputError } from "./errors.js";
import { buildFigure, parseSweepValue } from "./figure.js";
import { renderSvg } from "./svg.js";

const require = createRequire(import.meta.url);
const { Resvg } = require("@resvg/resvg-js") as typeof import("@resvg/resvg-js");

/** What to plot and where to put it. */
export interface PlotSpec {
  /** glob matching the trajectory CSVs */
  inputGlob: string;
  /** sweep parameter name used in panel titles, if any */
  panelBy: string | null;
  /** CSV columns to draw */
  curves: string[];
  /** output path; the extension is replaced by .svg and .png */
  output: string;
}

export interface RenderResult {
  svgPath: string;
  pngPath: string;
  panelCount: number;
  inputs: string[];
}

function fontFile(): string {
  return join(
    dirname(require.resolve("dejavu-fonts-ttf/package.json")),
    "ttf",
    "DejaVuSans.ttf",
  );
}

/**
 * Render the matched trajectories to one multi-panel figure, written as
 * both SVG and PNG. Inputs are opened read-only; rendering the same spec
 * twice produces byte-identical files.
 */
export function render(spec: PlotSpec): RenderResult {
  if (spec.curves.length === 0) {
    throw new InputError("no curves selected");
  }
  const files = fg
    .sync(spec.inputGlob, { onlyFiles: true })
    .sort((a, b) => {
      const va = parseSweepValue(a);
      const vb = parseSweepValue(b);
      if (va !== null && vb !== null && va !== vb) return va - vb;
      return a < b ? -1 : a > b ? 1 : 0;
    });
  if (files.length === 0) {
    throw new InputError(`no input files match '${spec.inputGlob}'`);
  }

  const trajectories = files.map((file) => readTrajectory(file, spec.curves));
  const model = buildFigure(trajectories, spec.curves, spec.panelBy);
  const svg = renderSvg(model);

  const base = spec.output.replace(/\.(svg|png)$/i, "");
  const svgPath = `${base}.svg`;
  const pngPath = `${base}.png`;
  mkdirSync(dirname(svgPath), { recursive: true });

  const png = new Resvg(svg, {
    background: "#ffffff",
    fitTo: { mode: "zoom", value: 2 },
    font: {
      loadSystemFonts: false,
      fontFiles: [fontFile()],
      defaultFontFamily: "DejaVu Sans",
    },
  }).render().asPng();

  writeFileSync(svgPath, svg);
  writeFileSync(pngPath, png);
  return { svgPath, pngPath, panelCount: model.panels.length, inputs: files };
}
