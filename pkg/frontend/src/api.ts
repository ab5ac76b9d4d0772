import type {
  ApiErrorBody,
  CloudDocument,
  CloudParams,
  MetaInfo,
  RelatedList,
  ResourcePage,
} from "./types.js";

/** Error raised when the service answers with a non-2xx status. */
export class ApiError extends Error {
  readonly status: number;
  readonly body: ApiErrorBody | null;

  constructor(status: number, body: ApiErrorBody | null) {
    super(body ? body.message : `request failed with status ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/**
 * Build the query string for a cloud request.
 *
 * Parameter values are passed through verbatim so whatever the controls
 * hold is exactly what the service sees (and validates).
 */
export function cloudQuery(params: CloudParams): string {
  const search = new URLSearchParams({
    method: String(params.method),
    n: String(params.n),
    k: String(params.k),
    mode: String(params.mode),
  });
  return `?${search.toString()}`;
}

async function parseError(response: Response): Promise<ApiErrorBody | null> {
  try {
    const body = (await response.json()) as ApiErrorBody;
    if (body && typeof body.message === "string") {
      return body;
    }
  } catch {
    // Non-JSON error body; fall through to a generic message.
  }
  return null;
}

/**
 * Typed client for the cloud service's JSON endpoints.
 *
 * The client is stateless: cancellation is the caller's concern and is
 * threaded through as an AbortSignal.
 */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    const impl = fetchImpl ?? globalThis.fetch;
    if (!impl) {
      throw new Error("no fetch implementation available");
    }
    this.fetchImpl = impl.bind(globalThis);
  }

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      headers: { accept: "application/json" },
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await parseError(response));
    }
    return (await response.json()) as T;
  }

  /** Fetch the main cloud. */
  cloud(params: CloudParams, signal?: AbortSignal): Promise<CloudDocument> {
    return this.getJson(`/cloud${cloudQuery(params)}`, signal);
  }

  /** Fetch the sub-cloud of resources carrying `tag`. */
  subcloud(
    tag: string,
    params: CloudParams,
    signal?: AbortSignal,
  ): Promise<CloudDocument> {
    return this.getJson(
      `/cloud/${encodeURIComponent(tag)}${cloudQuery(params)}`,
      signal,
    );
  }

  /** Fetch one page of resources for a tag. */
  resources(
    tag: string,
    limit: number,
    offset: number,
    signal?: AbortSignal,
  ): Promise<ResourcePage> {
    const search = new URLSearchParams({
      limit: String(limit),
      offset: String(offset),
    });
    return this.getJson(
      `/tags/${encodeURIComponent(tag)}/resources?${search.toString()}`,
      signal,
    );
  }

  /** Fetch the most similar tags for a tag. */
  related(
    tag: string,
    limit: number,
    signal?: AbortSignal,
  ): Promise<RelatedList> {
    const search = new URLSearchParams({ limit: String(limit) });
    return this.getJson(
      `/tags/${encodeURIComponent(tag)}/related?${search.toString()}`,
      signal,
    );
  }

  /** Fetch service metadata (corpus size, defaults, backend). */
  meta(signal?: AbortSignal): Promise<MetaInfo> {
    return this.getJson("/meta", signal);
  }
}
