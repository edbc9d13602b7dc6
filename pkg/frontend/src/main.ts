/**
 * Console walkthrough of the sandbox core against a running service.
 *
 *   python3 -m hapticslider.cli serve --port 8700 --archive gallery.json
 *   SANDBOX_URL=http://127.0.0.1:8700 node --experimental-strip-types src/main.ts
 */

import { SandboxApi } from "./api";
import { ChartView } from "./chart";

export { SandboxApi, ApiError } from "./api";
export type * from "./api";
export { EditorState, EditorError, mirrorContour } from "./editor";
export type { ContourPoint, EditMode, PointRef } from "./editor";
export { ChartView, ChartError, curveValueAt } from "./chart";
export type { CurvePoint, HighlightPoint, ForceReadout } from "./chart";

export async function walkthrough(baseUrl: string): Promise<void> {
  const api = new SandboxApi(baseUrl);
  const health = await api.health();
  console.log(`service ok: engine ${health.engine_version}, table v${health.table_version}`);

  const { projects } = await api.listProjects();
  if (projects.length === 0) {
    console.log("gallery is empty");
    return;
  }
  for (const p of projects) console.log(`  ${p.id}  ${p.name} [${p.edit_mode}]`);

  const chart = new ChartView();
  chart.beginStream();
  const id = projects[0]!.id;
  for await (const record of api.streamFd(id)) {
    if ("error" in record) throw new Error(record.error);
    if ("done" in record) chart.endStream(record.warnings);
    else chart.appendSample(record);
  }
  console.log(`${projects[0]!.name}: ${chart.series.length} samples`);
  for (const w of chart.warnings) {
    console.log(`  warning ${w.kind} over [${w.range[0]}, ${w.range[1]}] mm`);
  }

  const mid = chart.series[chart.series.length - 1]!.s / 2;
  const at = await api.fdAt(id, mid);
  chart.setReadout(at);
  const h = chart.setScrub(mid);
  console.log(
    `scrub at ${mid} mm: highlight (${h.s}, ${h.forward.toFixed(4)} N), ` +
      `readout forward ${at.force_forward_N.toFixed(4)} N / ` +
      `reverse ${at.force_reverse_N.toFixed(4)} N`,
  );
}

const entry = process.argv[1];
if (entry !== undefined && (entry.endsWith("main.ts") || entry.endsWith("main.js"))) {
  walkthrough(process.env.SANDBOX_URL ?? "http://127.0.0.1:8700").catch((err) => {
    console.error(err);
    process.exitCode = 1;
  });
}
