/**
 * In-memory stand-in for the cloud service, plus the document fixtures
 * the tests compare against.  The same builder functions produce both
 * the served bodies and the expected values, so deep-equality checks
 * are exact by construction.
 */
import type {
  CloudDocument,
  CloudEntry,
  MetaInfo,
  RelatedList,
  ResourcePage,
} from "../src/types.js";
import type { FetchLike } from "../src/api.js";

export const DIGEST =
  "5f2d1c0b9a8e7d6c5b4a39281706f5e4d3c2b1a090807060504030201000f1e2";

/** Tag universe with fixed weights and buckets. */
const UNIVERSE: Record<string, { weight: number; bucket: number }> = {
  alpha: { weight: 9.5, bucket: 6 },
  beta: { weight: 3.25, bucket: 3 },
  gamma: { weight: 2.0, bucket: 2 },
  delta: { weight: 7.0, bucket: 4 },
  epsilon: { weight: 1.0, bucket: 1 },
};

/** Cluster layout of the universe in clustered mode. */
const CLUSTERS: string[][] = [
  ["alpha", "beta", "gamma"],
  ["delta", "epsilon"],
];

export const ALL_TAGS = CLUSTERS.flat();

export interface ParamSet {
  method: string;
  n: number;
  k: number;
  mode: string;
}

export const DEFAULTS: ParamSet = { method: "d", n: 95, k: 12, mode: "clustered" };

function entriesFor(tags: string[]): CloudEntry[] {
  return tags.map((tag) => ({ tag, ...UNIVERSE[tag]! }));
}

/**
 * The document the fake service serves for a path: `tag === null` is the
 * main cloud, otherwise the sub-cloud of `tag` (which never contains the
 * tag itself).
 */
export function docFor(tag: string | null, params: ParamSet): CloudDocument {
  const kept = CLUSTERS.map((cluster) =>
    cluster.filter((member) => member !== tag),
  ).filter((cluster) => cluster.length > 0);
  const rows =
    params.mode === "alphabetical"
      ? [entriesFor([...kept.flat()].sort())]
      : kept.map(entriesFor);
  return {
    mode: params.mode,
    method: params.method,
    n: params.n,
    k: params.k,
    seed: 0,
    corpus_digest: DIGEST,
    rows,
  };
}

export function metaBody(): MetaInfo {
  return {
    digest: DIGEST,
    defaults: { ...DEFAULTS },
    corpus: { resources: 480, tags: 80, cells: 2400 },
    kernel_backend: "python",
  };
}

const RESOURCE_TOTAL = 45;

export function resourcePage(
  tag: string,
  limit: number,
  offset: number,
): ResourcePage {
  const resources = [];
  for (let i = offset; i < Math.min(offset + limit, RESOURCE_TOTAL); i++) {
    resources.push({ resource: `r-${tag}-${String(i).padStart(3, "0")}`, weight: RESOURCE_TOTAL - i });
  }
  return { tag, total: RESOURCE_TOTAL, limit, offset, resources };
}

export function relatedBody(
  tag: string,
  limit: number,
  universe: readonly string[] = ALL_TAGS,
): RelatedList {
  const others = universe.filter((t) => t !== tag).slice(0, limit);
  return {
    tag,
    related: others.map((t, i) => ({ tag: t, value: 1 / (i + 2) })),
  };
}

/** The sub-cloud the fake service derives from a fixed document:
 * the same rows with the clicked tag removed and empty rows dropped. */
export function subOf(doc: CloudDocument, tag: string): CloudDocument {
  const rows = doc.rows
    .map((row) => row.filter((entry) => entry.tag !== tag))
    .filter((row) => row.length > 0);
  return { ...doc, rows };
}

export interface CallRecord {
  path: string;
  signal: AbortSignal | undefined;
}

export interface FakeService {
  fetchImpl: FetchLike;
  calls: CallRecord[];
  /** Paths of every /cloud and /cloud/{tag} request so far. */
  cloudPaths(): string[];
  /** Paths of /cloud/{tag} requests, optionally for one tag. */
  subcloudPaths(tag?: string): string[];
  /** Make sub-cloud requests for a tag fail with a 500 until cleared. */
  failTags: Set<string>;
  /** Hold sub-cloud requests for a tag until release() is called. */
  holdTags: Set<string>;
  release(tag: string): void;
  /** Serve a structurally broken main cloud document while true. */
  malformedMain: boolean;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function abortError(): DOMException {
  return new DOMException("The operation was aborted.", "AbortError");
}

function abortable(work: Promise<Response>, signal?: AbortSignal): Promise<Response> {
  if (!signal) {
    return work;
  }
  if (signal.aborted) {
    return Promise.reject(abortError());
  }
  return new Promise((resolve, reject) => {
    const onAbort = () => reject(abortError());
    signal.addEventListener("abort", onAbort, { once: true });
    work.then(
      (value) => {
        signal.removeEventListener("abort", onAbort);
        resolve(value);
      },
      (err) => {
        signal.removeEventListener("abort", onAbort);
        reject(err);
      },
    );
  });
}

function paramsFrom(search: URLSearchParams): ParamSet {
  return {
    method: search.get("method") ?? DEFAULTS.method,
    n: Number(search.get("n") ?? DEFAULTS.n),
    k: Number(search.get("k") ?? DEFAULTS.k),
    mode: search.get("mode") ?? DEFAULTS.mode,
  };
}

export interface ServiceOptions {
  /** Serve this exact document as the main cloud (query params are then
   * ignored) and derive sub-clouds from it by filtering. */
  mainDoc?: CloudDocument;
}

/** Build the fake service. */
export function makeService(options: ServiceOptions = {}): FakeService {
  const holds = new Map<string, Array<() => void>>();
  const universe = (): string[] =>
    options.mainDoc
      ? options.mainDoc.rows.flat().map((entry) => entry.tag)
      : ALL_TAGS;

  const service: FakeService = {
    calls: [],
    failTags: new Set(),
    holdTags: new Set(),
    malformedMain: false,
    cloudPaths() {
      return this.calls
        .map((c) => c.path)
        .filter((p) => p === "/cloud" || p.startsWith("/cloud/") || p.startsWith("/cloud?"));
    },
    subcloudPaths(tag?: string) {
      const prefix = tag === undefined ? "/cloud/" : `/cloud/${encodeURIComponent(tag)}`;
      return this.calls.map((c) => c.path).filter((p) => p.startsWith(prefix));
    },
    release(tag: string) {
      for (const resolve of holds.get(tag) ?? []) {
        resolve();
      }
      holds.delete(tag);
    },
    fetchImpl: undefined as unknown as FetchLike,
  };

  const handle = async (u: URL): Promise<Response> => {
    const parts = u.pathname.split("/").filter((p) => p !== "");
    if (u.pathname === "/meta") {
      return jsonResponse(metaBody());
    }
    if (parts[0] === "cloud") {
      const params = paramsFrom(u.searchParams);
      if (!["a", "b", "c", "d"].includes(params.method)) {
        return jsonResponse(
          {
            error: "invalid_parameter",
            message: `unknown selection method: ${params.method}`,
            field: "method",
          },
          400,
        );
      }
      if (parts.length === 1) {
        if (service.malformedMain) {
          return jsonResponse({ mode: "clustered", rows: "oops" });
        }
        if (options.mainDoc) {
          return jsonResponse(options.mainDoc);
        }
        return jsonResponse(docFor(null, params));
      }
      const tag = decodeURIComponent(parts[1]!);
      if (!universe().includes(tag)) {
        return jsonResponse(
          { error: "unknown_tag", message: `unknown tag: ${tag}`, field: "tag" },
          404,
        );
      }
      if (service.failTags.has(tag)) {
        return jsonResponse(
          { error: "internal", message: "temporary failure" },
          500,
        );
      }
      if (options.mainDoc) {
        return jsonResponse(subOf(options.mainDoc, tag));
      }
      return jsonResponse(docFor(tag, params));
    }
    if (parts[0] === "tags" && parts.length === 3) {
      const tag = decodeURIComponent(parts[1]!);
      if (!universe().includes(tag)) {
        return jsonResponse(
          { error: "unknown_tag", message: `unknown tag: ${tag}`, field: "tag" },
          404,
        );
      }
      if (parts[2] === "resources") {
        const limit = Number(u.searchParams.get("limit") ?? 20);
        const offset = Number(u.searchParams.get("offset") ?? 0);
        return jsonResponse(resourcePage(tag, limit, offset));
      }
      if (parts[2] === "related") {
        const limit = Number(u.searchParams.get("limit") ?? 10);
        return jsonResponse(relatedBody(tag, limit, universe()));
      }
    }
    return jsonResponse({ error: "not_found", message: "no such route" }, 404);
  };

  service.fetchImpl = (url: string, init?: RequestInit) => {
    const u = new URL(url, "http://service.test");
    const signal = init?.signal ?? undefined;
    service.calls.push({ path: u.pathname + u.search, signal });
    const parts = u.pathname.split("/").filter((p) => p !== "");
    let gate: Promise<void> | null = null;
    if (parts[0] === "cloud" && parts.length === 2) {
      const tag = decodeURIComponent(parts[1]!);
      if (service.holdTags.has(tag)) {
        gate = new Promise<void>((resolve) => {
          const waiting = holds.get(tag) ?? [];
          waiting.push(resolve);
          holds.set(tag, waiting);
        });
      }
    }
    const work = (async () => {
      if (gate) {
        await gate;
      }
      return handle(u);
    })();
    return abortable(work, signal);
  };

  return service;
}

/** Poll until a condition holds (used for history traversal, which the
 * DOM implementation completes asynchronously). */
export async function until(
  cond: () => boolean,
  timeoutMs = 2000,
): Promise<void> {
  const start = Date.now();
  while (!cond()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error("condition not met in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

/** The visible tag texts inside a cloud element, in DOM order. */
export function domTags(scope: ParentNode): string[] {
  return [...scope.querySelectorAll("a.cloud-tag")].map(
    (a) => a.textContent ?? "",
  );
}
