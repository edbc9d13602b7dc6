/**
 * Integration tests against the real HTTP service. A gallery archive is
 * generated with the Python package, the service is started as a
 * subprocess, and the chart/readout path is checked end to end: the
 * displayed forces must equal the GET .../fd/at response exactly, and the
 * scrub highlight must lie on the streamed curve.
 */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { FdDoneRecord, SandboxApi } from "../src/api";
import { ChartView } from "../src/chart";

const PORT = 8690 + (process.pid % 200);
const BASE_URL = `http://127.0.0.1:${PORT}`;

let workdir: string;
let server: ChildProcess;
const api = new SandboxApi(BASE_URL);

const MAKE_ARCHIVE = `
import sys
from hapticslider.fixtures import bump_mechanism, wall_mechanism
from hapticslider.store import Gallery, Project, save_archive_file

gallery = Gallery()
gallery.add(Project(name="one bump", mechanism=bump_mechanism(base_spring=True), id="bump"))
gallery.add(Project(name="wall", mechanism=wall_mechanism(), id="wall"))
save_archive_file(gallery, sys.argv[1])
`;

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "sandbox-it-"));
  const archive = join(workdir, "gallery.json");
  execFileSync("python3", ["-c", MAKE_ARCHIVE, archive]);

  server = spawn(
    "python3",
    ["-m", "hapticslider.cli", "serve", "--port", String(PORT), "--archive", archive],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const health = await api.health();
      expect(health.status).toBe("ok");
      break;
    } catch {
      if (Date.now() > deadline) throw new Error("service did not come up");
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
});

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("service integration", () => {
  it("lists the preloaded gallery", async () => {
    const { projects } = await api.listProjects();
    expect(projects.map((p) => p.id).sort()).toEqual(["bump", "wall"]);
  });

  it("displayed forces match GET /fd/at exactly", async () => {
    const chart = new ChartView();
    for (const s of [0, 1.3, 3.7, 5, 6.05, 10]) {
      const response = await api.fdAt("bump", s);
      chart.setReadout(response);
      const shown = chart.displayedForces!;
      // the UI does no force math of its own: an independent second fetch
      // of the same endpoint must agree bit-for-bit with what is shown
      const fresh = await api.fdAt("bump", s);
      expect(Object.is(shown.force_forward_N, fresh.force_forward_N)).toBe(true);
      expect(Object.is(shown.force_reverse_N, fresh.force_reverse_N)).toBe(true);
      expect(Object.is(shown.base_force_N, fresh.base_force_N)).toBe(true);
      expect(Object.is(shown.displacement_mm, fresh.displacement_mm)).toBe(true);
      expect(response.sides.length).toBe(1);
      expect(response.engine_version).toBe(fresh.engine_version);
      expect(response.table_version).toBe(fresh.table_version);
    }
  });

  it("streams the FD curve and the scrub highlight lies on it", async () => {
    const chart = new ChartView();
    chart.beginStream();
    let done: FdDoneRecord | null = null;
    for await (const record of api.streamFd("bump", 0.1)) {
      if ("error" in record) throw new Error(record.error);
      if ("done" in record) done = record;
      else chart.appendSample(record);
    }
    expect(done).not.toBeNull();
    expect(done!.table_version).toBe(1);
    chart.endStream(done!.warnings);
    expect(chart.series.length).toBe(101);
    expect(chart.series[0]!.s).toBe(0);
    expect(chart.series[100]!.s).toBe(10);

    // at grid displacements the highlight reproduces the sample exactly
    for (const i of [0, 17, 50, 100]) {
      const sample = chart.series[i]!;
      const h = chart.setScrub(sample.s);
      expect(Object.is(h.forward, sample.forward)).toBe(true);
      expect(Object.is(h.reverse, sample.reverse)).toBe(true);
    }

    // between samples it lies on the bracketing segment of the polyline
    for (let k = 0; k < 50; k++) {
      const s = 10 * ((k + 0.371) / 50.371);
      const h = chart.setScrub(s);
      expect(h.s).toBe(s);
      let lo = 0;
      while (lo + 1 < chart.series.length - 1 && chart.series[lo + 1]!.s <= s) lo++;
      const a = chart.series[lo]!;
      const b = chart.series[lo + 1]!;
      for (const key of ["forward", "reverse"] as const) {
        const deviation = Math.abs(
          (b.s - a.s) * (h[key] - a[key]) - (h.s - a.s) * (b[key] - a[key]),
        );
        expect(deviation).toBeLessThanOrEqual(1e-12);
      }
    }
  });

  it("reports the wall fixture's sticking span in the stream summary", async () => {
    const chart = new ChartView();
    chart.beginStream();
    for await (const record of api.streamFd("wall", 0.1)) {
      if ("error" in record) throw new Error(record.error);
      if ("done" in record) chart.endStream(record.warnings);
      else chart.appendSample(record);
    }
    const sticking = chart.warnings.filter((w) => w.kind === "sticking");
    expect(sticking.length).toBe(1);
    expect(sticking[0]!.range[0]).toBeCloseTo(4.0, 9);
    expect(sticking[0]!.range[1]).toBeCloseTo(10.0, 9);
    expect(chart.warningsAt(7).map((w) => w.kind)).toContain("sticking");
  });

  it("edits mark the curve stale and recomputation clears it", async () => {
    const dup = await api.duplicateProject("bump");
    const id = dup.project.id;
    try {
      await api.patchParameters(id, { friction_mu: 0.1 });
      const afterEdit = await api.getProject(id);
      expect(afterEdit.project.curve_stale).toBe(true);
      for await (const record of api.streamFd(id)) {
        if ("error" in record) throw new Error(record.error);
      }
      const afterCompute = await api.getProject(id);
      expect(afterCompute.project.curve_stale).toBe(false);
    } finally {
      await api.deleteProject(id);
    }
  });

  it("serves the laser-ready export and the archive round trip", async () => {
    const svg = await api.exportSvg("bump");
    expect(svg).toContain("<svg");
    expect(svg).toContain("cut");
    const archive = await api.getArchive();
    const loaded = await api.postArchive(archive);
    expect(loaded.loaded).toBe(2);
  });
});
