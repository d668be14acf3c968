import { basename } from "node:path";

import type { Trajectory } from "./csv.js";

export interface SeriesModel {
  label: string;
  points: Array<readonly [number, number]>;
}

export interface PanelModel {
  title: string;
  series: SeriesModel[];
}

export interface FigureModel {
  panels: PanelModel[];
  xDomain: readonly [number, number];
  yDomain: readonly [number, number];
  xLabel: string;
  yLabel: string;
}

/**
 * Sweep value encoded in a trajectory file name
 * (`<name>_<parameter>=<value>.csv`), or null for unswept runs.
 */
export function parseSweepValue(file: string): number | null {
  const match = /=(-?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)\.csv$/.exec(
    basename(file),
  );
  if (match === null) return null;
  const value = Number(match[1]);
  return Number.isFinite(value) ? value : null;
}

function panelLabel(traj: Trajectory, panelBy: string | null): string {
  const value = parseSweepValue(traj.file);
  if (value !== null) {
    return `${panelBy ?? "value"} = ${value}`;
  }
  return basename(traj.file).replace(/\.csv$/, "");
}

/**
 * Arrange trajectories into panels: one labeled panel per sweep value,
 * except that a single-curve selection over several trajectories collapses
 * into one panel with one curve per sweep value (so sweeps of a single
 * measure can be compared directly).
 */
export function buildFigure(
  trajectories: readonly Trajectory[],
  curves: readonly string[],
  panelBy: string | null,
): FigureModel {
  const zip = (traj: Trajectory, column: string) => {
    const values = traj.series.get(column)!;
    return traj.t.map((t, i) => [t, values[i]] as const);
  };

  let panels: PanelModel[];
  if (curves.length === 1 && trajectories.length > 1) {
    panels = [{
      title: curves[0],
      series: trajectories.map((traj) => ({
        label: panelLabel(traj, panelBy),
        points: zip(traj, curves[0]),
      })),
    }];
  } else {
    panels = trajectories.map((traj) => ({
      title: panelLabel(traj, panelBy),
      series: curves.map((column) => ({
        label: column,
        points: zip(traj, column),
      })),
    }));
  }

  let xMin = Infinity, xMax = -Infinity, yMax = -Infinity, yMin = 0;
  for (const panel of panels) {
    for (const { points } of panel.series) {
      for (const [x, y] of points) {
        xMin = Math.min(xMin, x);
        xMax = Math.max(xMax, x);
        yMin = Math.min(yMin, y);
        yMax = Math.max(yMax, y);
      }
    }
  }
  if (yMax <= yMin) yMax = yMin + 1;

  return {
    panels,
    xDomain: [xMin, xMax],
    yDomain: [yMin, yMax + 0.05 * (yMax - yMin)],
    xLabel: "t (ps)",
    yLabel: "correlation",
  };
}
