/**
 * End-to-end: drive the simulator CLI to produce fresh CSV exports, then
 * render every one of them through the plot CLI.  Exercises the real file
 * contract between the two packages.
 */

import { execFileSync, spawnSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { beforeAll, describe, expect, it } from "vitest";

const PLOT = join(__dirname, "..", "dist", "plot.js");

function python(args: string[]): void {
  execFileSync("python3", ["-m", "stoprotor.cli", ...args], { stdio: "pipe" });
}

function plot(args: string[]) {
  return spawnSync("node", [PLOT, ...args], { encoding: "utf8" });
}

function hasSimulator(): boolean {
  const probe = spawnSync("python3", ["-c", "import stoprotor"], { encoding: "utf8" });
  return probe.status === 0;
}

describe("csv-to-figure pipeline", () => {
  let dir: string;

  beforeAll(() => {
    if (!existsSync(PLOT)) {
      throw new Error("dist/plot.js missing: run `npm run build` first");
    }
    if (!hasSimulator()) {
      throw new Error("stoprotor python package not importable");
    }
    dir = mkdtempSync(join(tmpdir(), "stoprotor-plots-"));
    const cfg = join(dir, "cfg.json");
    writeFileSync(cfg, JSON.stringify({
      scenario: { name: "pipe", duration: 3.0, script: [[0.2, 0, 1, 0], [0.5, 0, 1, 1]] },
      comparison: { horizon: 3.0 },
      sweep: { nx: 15, ny: 15 },
    }));
    python(["simulate", "--config", cfg, "--out", join(dir, "mission.csv")]);
    python(["compare", "--config", cfg, "--out", join(dir, "cmp")]);
    python(["sweep", "--config", cfg, "--out", join(dir, "grid.csv")]);
  }, 120_000);

  it("renders the comparison panels", () => {
    const inputs = ["step", "modelerr", "disturb", "effort"]
      .map((p) => join(dir, `cmp_${p}.csv`));
    const res = plot(["--kind", "comparison", "--in", ...inputs,
                      "--out", join(dir, "cmp.svg")]);
    expect(res.status, res.stderr).toBe(0);
    const svg = readFileSync(join(dir, "cmp.svg"), "utf8");
    expect(svg.match(/class="panel"/g)).toHaveLength(4);
  });

  it("renders the sweep map with matching unstable count", () => {
    const res = plot(["--kind", "sweep", "--in", join(dir, "grid.csv"),
                      "--out", join(dir, "grid.svg")]);
    expect(res.status, res.stderr).toBe(0);
    const csvUnstable = readFileSync(join(dir, "grid.csv"), "utf8")
      .split("\n")
      .filter((ln) => !ln.startsWith("#") && ln.split(",")[4] === "0.0")
      .length;
    const svg = readFileSync(join(dir, "grid.svg"), "utf8");
    const drawn = (svg.match(/class="unstable"/g) ?? []).length;
    expect(drawn).toBe(csvUnstable);
    expect(csvUnstable).toBeGreaterThan(0);
  });

  it("renders the mission timeline", () => {
    const res = plot(["--kind", "mission", "--in", join(dir, "mission.csv"),
                      "--out", join(dir, "mission.svg")]);
    expect(res.status, res.stderr).toBe(0);
    const svg = readFileSync(join(dir, "mission.svg"), "utf8");
    expect(svg.match(/class="panel"/g)).toHaveLength(3);
    expect(svg).toContain("state-band");
  });

  it("fails cleanly on a schema mismatch, naming the column", () => {
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "t,e_single\n0.0,1.0\n");
    const res = plot(["--kind", "comparison", "--in", bad,
                      "--out", join(dir, "bad.svg")]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("missing column: e_cascaded");
  });

  it("produces byte-identical output for identical input", () => {
    const out1 = join(dir, "det1.svg");
    const out2 = join(dir, "det2.svg");
    for (const out of [out1, out2]) {
      const res = plot(["--kind", "mission", "--in", join(dir, "mission.csv"),
                        "--out", out]);
      expect(res.status).toBe(0);
    }
    expect(readFileSync(out1, "utf8")).toBe(readFileSync(out2, "utf8"));
  });
});
