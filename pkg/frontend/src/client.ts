/**
 * Typed client for the /v1 HTTP API, with optimistic-concurrency rebase:
 * a batch rejected as stale is retried against the fresh version (the
 * service replays the whole log, so rebasing is just re-posting).
 */

export interface StateCorner {
  id: number;
  x: number;
  y: number;
}

export interface StateSpace {
  id: string;
  name: string;
  space_type: number;
  corners: number[];
  wall_flags: boolean[];
  entrances: Array<{ id: string; wall_index: number; endpoints: number[] }>;
}

export interface ProjectState {
  version: number;
  warnings: string[];
  lines: Array<{ id: number; kind: string; offset: number; ghost: boolean }>;
  corners: StateCorner[];
  entrance_corners: StateCorner[];
  spaces: StateSpace[];
}

export interface Legend {
  width_px: number;
  height_px: number;
  px_per_meter: number;
  origin_xz: [number, number];
  colors: Record<string, string>;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1${path}`, init);
    if (!res.ok) {
      let code = "http_error";
      let message = `${res.status} on ${path}`;
      try {
        const body = (await res.json()) as { error?: string; message?: string };
        code = body.error ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(res.status, code, message);
    }
    return res;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    return (await (await this.request(path, init)).json()) as T;
  }

  async createProject(width: number, height: number): Promise<{ id: string; version: number }> {
    return this.json("/projects", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ width, height }),
    });
  }

  async getState(pid: string): Promise<ProjectState> {
    return this.json(`/projects/${pid}/state`);
  }

  async postOps(pid: string, baseVersion: number, ops: string[]): Promise<ProjectState> {
    return this.json(`/projects/${pid}/ops`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ base_version: baseVersion, ops }),
    });
  }

  /**
   * Post a batch at the current version; on a version conflict, refetch
   * and retry (up to `retries` times).
   */
  async postOpsWithRebase(pid: string, ops: string[], retries = 3): Promise<ProjectState> {
    let version = (await this.getState(pid)).version;
    for (let attempt = 0; ; attempt++) {
      try {
        return await this.postOps(pid, version, ops);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409 && attempt < retries) {
          version = (await this.getState(pid)).version;
          continue;
        }
        throw err;
      }
    }
  }

  async postAnchors(pid: string, text: string): Promise<void> {
    await this.request(`/projects/${pid}/anchors`, { method: "POST", body: text });
  }

  async exportSim(pid: string): Promise<Uint8Array> {
    const res = await this.request(`/projects/${pid}/export/sim`);
    return new Uint8Array(await res.arrayBuffer());
  }

  async exportGeojson(pid: string): Promise<Uint8Array> {
    const res = await this.request(`/projects/${pid}/export/geojson`);
    return new Uint8Array(await res.arrayBuffer());
  }

  async uploadMesh(pid: string, ply: Uint8Array, filename = "scan.ply"): Promise<unknown> {
    const form = new FormData();
    form.append("file", new Blob([ply as BlobPart]), filename);
    return this.json(`/projects/${pid}/mesh`, { method: "POST", body: form });
  }

  async runStage(pid: string, name: string, params: Record<string, unknown> = {}): Promise<unknown> {
    return this.json(`/projects/${pid}/stages/${name}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  async getLabels(pid: string): Promise<{ labels: number[] }> {
    return this.json(`/projects/${pid}/superpixels/labels`);
  }

  async getLegend(pid: string): Promise<Legend> {
    return this.json(`/projects/${pid}/superpixels/legend`);
  }

  async getTopdownPng(pid: string): Promise<Uint8Array> {
    const res = await this.request(`/projects/${pid}/superpixels/topdown`);
    return new Uint8Array(await res.arrayBuffer());
  }

  async postAssignments(
    pid: string,
    assignments: Array<{ name: string; superpixels: number[]; color?: string }>,
  ): Promise<void> {
    await this.request(`/projects/${pid}/assignments`, {
      method: "POST",
      body: JSON.stringify(assignments),
    });
  }

  async exportPopulated(pid: string): Promise<Uint8Array> {
    const res = await this.request(`/projects/${pid}/export/populated`);
    return new Uint8Array(await res.arrayBuffer());
  }
}
