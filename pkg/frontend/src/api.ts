/**
 * Typed HTTP client for the slider-mechanism design service.
 *
 * This is the sandbox's only source of force data: the UI performs no
 * independent force math, so every number shown comes verbatim from a
 * response object defined here. FD curves arrive as newline-delimited JSON
 * records streamed in displacement order, ending with a stamped summary.
 */

/** Version stamp attached to every JSON response. */
export interface Stamped {
  engine_version: string;
  table_version: number;
}

export interface HealthResponse extends Stamped {
  status: string;
}

export interface ProjectSummary {
  id: string;
  name: string;
  edit_mode: string;
  curve_stale: boolean;
  modified: string;
}

export interface ProjectListResponse extends Stamped {
  projects: ProjectSummary[];
}

/** Profile contour in assembly millimetres; y strictly increasing. */
export interface ProfileDict {
  side: "left" | "right";
  material_side: -1 | 1;
  contour: [number, number][];
}

export interface MechanismDict {
  sides: {
    profile: ProfileDict;
    spring: Record<string, unknown>;
    mount: { rest_tip: [number, number]; side: string } | null;
  }[];
  base_spring: Record<string, unknown> | null;
  travel: number;
  friction_mu: number;
  contact_tolerance: number;
}

export interface ProjectDetail {
  id: string;
  name: string;
  edit_mode: string;
  created: string;
  modified: string;
  mechanism: MechanismDict;
  cached_curve: unknown;
  curve_stale: boolean;
}

export interface ProjectResponse extends Stamped {
  project: ProjectDetail;
}

/** One streamed FD sample (a line of the NDJSON body). */
export interface FdSampleRecord {
  displacement_mm: number;
  force_forward_N: number;
  force_reverse_N: number;
}

export interface WarningRecord {
  kind: string;
  range: [number, number];
}

/** Final NDJSON record closing a successful FD stream. */
export interface FdDoneRecord extends Stamped {
  done: true;
  warnings: WarningRecord[];
}

export interface FdErrorRecord {
  error: string;
}

export type FdStreamRecord = FdSampleRecord | FdDoneRecord | FdErrorRecord;

/** Per-side contact detail from the single-displacement solve. */
export interface SideContactDetail {
  state: string;
  deflection_angle_rad: number;
  tip_deflection_mm: number;
  contact_point: [number, number] | null;
  force_forward_N: number;
  force_reverse_N: number;
}

/** Response of GET /projects/{id}/fd/at — drives the scrub readout. */
export interface FdAtResponse extends Stamped {
  displacement_mm: number;
  force_forward_N: number;
  force_reverse_N: number;
  base_force_N: number;
  sides: SideContactDetail[];
}

export interface CalibrateResponse extends Stamped {
  scale_factor: number;
}

/** Error raised for non-2xx responses, carrying the server's detail text. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function raiseForStatus(res: Response): Promise<void> {
  if (res.ok) return;
  let detail = res.statusText;
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (body.detail !== undefined) detail = JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body: keep the status text */
  }
  throw new ApiError(res.status, detail);
}

export class SandboxApi {
  constructor(private readonly baseUrl: string) {}

  private url(path: string, params?: Record<string, number | string>): string {
    const u = new URL(path, this.baseUrl);
    for (const [k, v] of Object.entries(params ?? {})) {
      u.searchParams.set(k, String(v));
    }
    return u.toString();
  }

  private async getJson<T>(path: string, params?: Record<string, number | string>): Promise<T> {
    const res = await fetch(this.url(path, params));
    await raiseForStatus(res);
    return (await res.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.getJson("/health");
  }

  listProjects(): Promise<ProjectListResponse> {
    return this.getJson("/projects");
  }

  getProject(id: string): Promise<ProjectResponse> {
    return this.getJson(`/projects/${id}`);
  }

  async createProject(
    name: string,
    mechanism: MechanismDict,
    editMode = "create",
  ): Promise<ProjectResponse> {
    const res = await fetch(this.url("/projects"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ name, mechanism, edit_mode: editMode }),
    });
    await raiseForStatus(res);
    return (await res.json()) as ProjectResponse;
  }

  async deleteProject(id: string): Promise<void> {
    const res = await fetch(this.url(`/projects/${id}`), { method: "DELETE" });
    await raiseForStatus(res);
  }

  async duplicateProject(id: string): Promise<ProjectResponse> {
    const res = await fetch(this.url(`/projects/${id}/duplicate`), { method: "POST" });
    await raiseForStatus(res);
    return (await res.json()) as ProjectResponse;
  }

  async putProfile(
    id: string,
    profile: ProfileDict,
    sideIndex = 0,
  ): Promise<ProjectResponse> {
    const res = await fetch(this.url(`/projects/${id}/profile`), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ profile, side_index: sideIndex }),
    });
    await raiseForStatus(res);
    return (await res.json()) as ProjectResponse;
  }

  async patchParameters(
    id: string,
    patch: {
      travel?: number;
      friction_mu?: number;
      base_spring?: Record<string, unknown>;
      clear_base_spring?: boolean;
    },
  ): Promise<ProjectResponse> {
    const res = await fetch(this.url(`/projects/${id}/parameters`), {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(patch),
    });
    await raiseForStatus(res);
    return (await res.json()) as ProjectResponse;
  }

  /**
   * Stream the FD curve as it is computed. Yields each NDJSON record in
   * displacement order; the final record has `done: true` and the version
   * stamp. Abort the signal to cancel the computation server-side.
   */
  async *streamFd(
    id: string,
    step?: number,
    signal?: AbortSignal,
  ): AsyncGenerator<FdStreamRecord> {
    const params: Record<string, number> = {};
    if (step !== undefined) params.step = step;
    const res = await fetch(this.url(`/projects/${id}/fd`, params), { signal });
    await raiseForStatus(res);
    if (res.body === null) throw new ApiError(res.status, "empty stream body");
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, nl);
        buffer = buffer.slice(nl + 1);
        if (line.trim().length > 0) yield JSON.parse(line) as FdStreamRecord;
      }
    }
    if (buffer.trim().length > 0) yield JSON.parse(buffer) as FdStreamRecord;
  }

  async fdCsv(id: string, step?: number): Promise<string> {
    const params: Record<string, number> = {};
    if (step !== undefined) params.step = step;
    const res = await fetch(this.url(`/projects/${id}/fd.csv`, params));
    await raiseForStatus(res);
    return res.text();
  }

  /** Single-displacement solve behind the scrub slider. */
  fdAt(id: string, s: number): Promise<FdAtResponse> {
    return this.getJson(`/projects/${id}/fd/at`, { s });
  }

  async exportSvg(id: string): Promise<string> {
    const res = await fetch(this.url(`/projects/${id}/export.svg`));
    await raiseForStatus(res);
    return res.text();
  }

  async calibrate(simulatedCsv: string, measuredCsv: string): Promise<CalibrateResponse> {
    const res = await fetch(this.url("/calibrate"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ simulated_csv: simulatedCsv, measured_csv: measuredCsv }),
    });
    await raiseForStatus(res);
    return (await res.json()) as CalibrateResponse;
  }

  async getArchive(): Promise<string> {
    const res = await fetch(this.url("/gallery/archive"));
    await raiseForStatus(res);
    return res.text();
  }

  async postArchive(archiveJson: string): Promise<Stamped & { loaded: number }> {
    const res = await fetch(this.url("/gallery/archive"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: archiveJson,
    });
    await raiseForStatus(res);
    return (await res.json()) as Stamped & { loaded: number };
  }
}
