import { scaleLinear, schemeTableau10 } from "d3";

import type { FigureModel, PanelModel } from "./figure.js";

// Panel cell geometry, px. Every coordinate below is derived from these,
// so the output is a pure function of the figure model.
const CELL_W = 420;
const CELL_H = 320;
const MARGIN = { left: 66, right: 16, top: 30, bottom: 46 } as const;
const PAD = 6;
const INNER_W = CELL_W - MARGIN.left - MARGIN.right;
const INNER_H = CELL_H - MARGIN.top - MARGIN.bottom;
const FONT = "DejaVu Sans, Verdana, sans-serif";

const fmt = (v: number): string => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

const escapeXml = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function gridShape(n: number): { cols: number; rows: number } {
  const cols = n <= 1 ? 1 : n <= 4 ? 2 : 3;
  return { cols, rows: Math.ceil(n / cols) };
}

export function figureSize(panelCount: number): { width: number; height: number } {
  const { cols, rows } = gridShape(panelCount);
  return { width: cols * CELL_W + 2 * PAD, height: rows * CELL_H + 2 * PAD };
}

function renderPanel(
  panel: PanelModel,
  index: number,
  model: FigureModel,
  originX: number,
  originY: number,
): string {
  const x = scaleLinear().domain(model.xDomain).range([0, INNER_W]);
  const y = scaleLinear().domain(model.yDomain).range([INNER_H, 0]);
  const xTicks = x.ticks(6);
  const yTicks = y.ticks(5);
  const xFmt = x.tickFormat(6);
  const yFmt = y.tickFormat(5);

  const parts: string[] = [];
  parts.push(
    `<g class="panel" transform="translate(${originX + MARGIN.left},${originY + MARGIN.top})">`,
  );
  parts.push(
    `<clipPath id="clip-${index}"><rect x="0" y="0" width="${INNER_W}" height="${INNER_H}"/></clipPath>`,
  );
  parts.push(
    `<text class="title" x="${fmt(INNER_W / 2)}" y="-10" text-anchor="middle" ` +
    `font-family="${FONT}" font-size="13">${escapeXml(panel.title)}</text>`,
  );

  // frame and ticks
  parts.push(
    `<rect x="0" y="0" width="${INNER_W}" height="${INNER_H}" fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  for (const tick of xTicks) {
    const px = fmt(x(tick));
    parts.push(
      `<line x1="${px}" y1="${INNER_H}" x2="${px}" y2="${INNER_H + 5}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px}" y="${INNER_H + 18}" text-anchor="middle" ` +
      `font-family="${FONT}" font-size="10">${escapeXml(xFmt(tick))}</text>`,
    );
  }
  for (const tick of yTicks) {
    const py = fmt(y(tick));
    parts.push(
      `<line x1="-5" y1="${py}" x2="0" y2="${py}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="-9" y="${py}" dy="3.5" text-anchor="end" ` +
      `font-family="${FONT}" font-size="10">${escapeXml(yFmt(tick))}</text>`,
    );
  }
  parts.push(
    `<text x="${fmt(INNER_W / 2)}" y="${INNER_H + 36}" text-anchor="middle" ` +
    `font-family="${FONT}" font-size="12">${escapeXml(model.xLabel)}</text>`,
  );
  parts.push(
    `<text transform="translate(${-MARGIN.left + 16},${fmt(INNER_H / 2)}) rotate(-90)" ` +
    `text-anchor="middle" font-family="${FONT}" font-size="12">${escapeXml(model.yLabel)}</text>`,
  );

  // curves
  for (const [k, series] of panel.series.entries()) {
    const color = schemeTableau10[k % schemeTableau10.length];
    const path = series.points
      .map(([px, py], i) => `${i === 0 ? "M" : "L"}${fmt(x(px))} ${fmt(y(py))}`)
      .join("");
    parts.push(
      `<path class="curve" clip-path="url(#clip-${index})" d="${path}" ` +
      `fill="none" stroke="${color}" stroke-width="1.5" stroke-linejoin="round"/>`,
    );
  }

  // legend, top right inside the plot area
  const legendW = 10 + 8 * Math.max(...panel.series.map((s) => s.label.length)) + 30;
  const lx = INNER_W - legendW - 6;
  for (const [k, series] of panel.series.entries()) {
    const color = schemeTableau10[k % schemeTableau10.length];
    const ly = 12 + 15 * k;
    parts.push(
      `<line x1="${fmt(lx)}" y1="${ly}" x2="${fmt(lx + 20)}" y2="${ly}" ` +
      `stroke="${color}" stroke-width="1.5"/>`,
    );
    parts.push(
      `<text x="${fmt(lx + 26)}" y="${ly}" dy="3.5" ` +
      `font-family="${FONT}" font-size="11">${escapeXml(series.label)}</text>`,
    );
  }

  parts.push("</g>");
  return parts.join("\n");
}

/** Render the figure model to a standalone SVG document (deterministic). */
export function renderSvg(model: FigureModel): string {
  const { cols } = gridShape(model.panels.length);
  const { width, height } = figureSize(model.panels.length);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  for (const [i, panel] of model.panels.entries()) {
    const originX = PAD + (i % cols) * CELL_W;
    const originY = PAD + Math.floor(i / cols) * CELL_H;
    parts.push(renderPanel(panel, i, model, originX, originY));
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
