import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { readTrajectory } from "../src/csv.js";
import { ColumnError, InputError } from "../src/errors.js";
import { buildFigure, parseSweepValue } from "../src/figure.js";
import { loadManifest } from "../src/manifest.js";
import { render } from "../src/render.js";
import { renderSvg } from "../src/svg.js";

const scratch = () => mkdtempSync(join(tmpdir(), "figplots-"));

const CSV = "t_ps,cc,eof\n0,1,1\n1,0.5,0.3\n2,0.25,0.1\n";

function fakeTrajectory(file: string, scale: number) {
  return {
    file,
    columns: ["t_ps", "cc", "eof"],
    t: [0, 1, 2],
    series: new Map([
      ["cc", [scale, scale / 2, scale / 4]],
      ["eof", [scale, scale / 3, scale / 9]],
    ]),
  };
}

describe("sweep value parsing", () => {
  it("reads the trailing =value from sweep file names", () => {
    expect(parseSweepValue("fig5_forster_over_2pi=5.csv")).toBe(5);
    expect(parseSweepValue("/x/fig6_p0_over_2pi=2.5.csv")).toBe(2.5);
    expect(parseSweepValue("fig7_tau_p=1e1.csv")).toBe(10);
    expect(parseSweepValue("fig4a.csv")).toBeNull();
  });
});

describe("csv reading", () => {
  it("raises a column error naming the missing column", () => {
    const dir = scratch();
    const file = join(dir, "run.csv");
    writeFileSync(file, CSV);
    expect(() => readTrajectory(file, ["cc", "discord"])).toThrowError(
      /column 'discord' missing from run\.csv/,
    );
    try {
      readTrajectory(file, ["discord"]);
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ColumnError);
      expect((err as ColumnError).column).toBe("discord");
      expect((err as ColumnError).message).toContain("t_ps, cc, eof");
    }
  });

  it("rejects non-numeric cells with row and column context", () => {
    const dir = scratch();
    const file = join(dir, "bad.csv");
    writeFileSync(file, "t_ps,cc\n0,1\n1,oops\n");
    expect(() => readTrajectory(file, ["cc"])).toThrowError(
      /bad\.csv row 2: column 'cc'/,
    );
  });

  it("parses numbers", () => {
    const dir = scratch();
    const file = join(dir, "ok.csv");
    writeFileSync(file, CSV);
    const traj = readTrajectory(file, ["cc"]);
    expect(traj.t).toEqual([0, 1, 2]);
    expect(traj.series.get("cc")).toEqual([1, 0.5, 0.25]);
  });
});

describe("figure layout rules", () => {
  it("gives one labeled panel per sweep value for multi-curve selections", () => {
    const model = buildFigure(
      [fakeTrajectory("a_g=1.csv", 1), fakeTrajectory("a_g=2.csv", 0.5)],
      ["cc", "eof"],
      "g",
    );
    expect(model.panels).toHaveLength(2);
    expect(model.panels[0].title).toBe("g = 1");
    expect(model.panels[1].title).toBe("g = 2");
    expect(model.panels[0].series.map((s) => s.label)).toEqual(["cc", "eof"]);
  });

  it("collapses a single-curve sweep into one panel with a curve per value", () => {
    const model = buildFigure(
      [
        fakeTrajectory("a_g=1.csv", 1),
        fakeTrajectory("a_g=2.csv", 0.5),
        fakeTrajectory("a_g=3.csv", 0.25),
      ],
      ["cc"],
      "g",
    );
    expect(model.panels).toHaveLength(1);
    expect(model.panels[0].series.map((s) => s.label)).toEqual([
      "g = 1",
      "g = 2",
      "g = 3",
    ]);
  });

  it("shares axis domains across panels", () => {
    const model = buildFigure(
      [fakeTrajectory("a_g=1.csv", 1), fakeTrajectory("a_g=2.csv", 0.25)],
      ["cc"],
      "g",
    );
    expect(model.xDomain).toEqual([0, 2]);
    expect(model.yDomain[1]).toBeGreaterThan(1);
  });
});

describe("svg rendering", () => {
  it("is a pure function of the model", () => {
    const model = buildFigure(
      [fakeTrajectory("a_g=1.csv", 1), fakeTrajectory("a_g=2.csv", 0.5)],
      ["cc", "eof"],
      "g",
    );
    const first = renderSvg(model);
    expect(renderSvg(model)).toBe(first);
    expect(first).toContain('class="panel"');
    expect(first).toContain('class="curve"');
    expect(first.startsWith("<svg ")).toBe(true);
  });

  it("escapes markup in labels", () => {
    const traj = fakeTrajectory("a.csv", 1);
    const model = buildFigure([traj], ["cc"], null);
    model.panels[0].title = "<b> & more";
    expect(renderSvg(model)).toContain("&lt;b&gt; &amp; more");
  });
});

describe("input validation", () => {
  it("rejects an empty glob", () => {
    const dir = scratch();
    expect(() =>
      render({
        inputGlob: join(dir, "*.csv"),
        panelBy: null,
        curves: ["cc"],
        output: join(dir, "out"),
      }),
    ).toThrowError(/no input files match/);
  });

  it("rejects an empty curve list", () => {
    expect(() =>
      render({ inputGlob: "x", panelBy: null, curves: [], output: "y" }),
    ).toThrowError(InputError);
  });

  it("rejects a directory without a manifest", () => {
    expect(() => loadManifest(scratch())).toThrowError(/no manifest\.json/);
  });

  it("rejects a malformed manifest", () => {
    const dir = scratch();
    writeFileSync(
      join(dir, "manifest.json"),
      JSON.stringify({ tool: { name: "dotcavity", version: "0", backend: "x" } }),
    );
    expect(() => loadManifest(dir)).toThrowError(/not a valid manifest/);
  });
});
