import type { CloudDocument, CloudParams, ResourcePage } from "./types.js";

/**
 * Check that a value has the shape of a cloud document.
 *
 * Returns a human-readable complaint for the error panel, or null when
 * the document is well formed.  The client refuses to render documents
 * that fail this check rather than guessing at their intent.
 */
export function documentProblem(doc: unknown): string | null {
  if (doc === null || typeof doc !== "object") {
    return "response is not an object";
  }
  const record = doc as Record<string, unknown>;
  for (const field of ["mode", "method", "corpus_digest"] as const) {
    if (typeof record[field] !== "string") {
      return `missing or invalid field: ${field}`;
    }
  }
  for (const field of ["n", "k", "seed"] as const) {
    if (typeof record[field] !== "number") {
      return `missing or invalid field: ${field}`;
    }
  }
  if (!Array.isArray(record["rows"])) {
    return "missing or invalid field: rows";
  }
  for (const row of record["rows"] as unknown[]) {
    if (!Array.isArray(row)) {
      return "rows must be arrays of entries";
    }
    for (const entry of row as unknown[]) {
      if (entry === null || typeof entry !== "object") {
        return "row entry is not an object";
      }
      const cell = entry as Record<string, unknown>;
      if (typeof cell["tag"] !== "string") {
        return "row entry has no tag";
      }
      if (typeof cell["weight"] !== "number" || typeof cell["bucket"] !== "number") {
        return `row entry for ${String(cell["tag"])} has no weight/bucket`;
      }
    }
  }
  return null;
}

/** Flatten a document's rows into display order. */
export function displayOrder(doc: CloudDocument): string[] {
  const tags: string[] = [];
  for (const row of doc.rows) {
    for (const entry of row) {
      tags.push(entry.tag);
    }
  }
  return tags;
}

function cacheKey(path: readonly string[], params: CloudParams): string {
  // The displayed cloud depends only on the innermost tag (or the root)
  // and the request parameters; earlier breadcrumb entries are context.
  // Numeric params are keyed by their string form so 95 and "95" agree.
  const tag = path.length > 0 ? path[path.length - 1] : "";
  return JSON.stringify([
    tag,
    String(params.method),
    String(params.n),
    String(params.k),
    String(params.mode),
  ]);
}

/**
 * Navigation state for the browsing session.
 *
 * `path` is the breadcrumb: the stack of tags drilled into, outermost
 * first.  An empty path shows the main cloud; a non-empty path shows the
 * sub-cloud of its last tag.  Back-navigation pops exactly one entry.
 * Documents are cached per (innermost tag, params) so revisiting a level
 * does not refetch it.
 */
export class BrowseState {
  path: string[] = [];
  params: CloudParams;
  doc: CloudDocument | null = null;
  /** The resource page shown for the innermost tag (null at the root). */
  resourcePage: ResourcePage | null = null;
  private readonly docs = new Map<string, CloudDocument>();
  private readonly capacity: number;

  constructor(params: CloudParams, capacity = 64) {
    this.params = { ...params };
    this.capacity = capacity;
  }

  /** The tag whose sub-cloud is displayed, or null at the root. */
  get currentTag(): string | null {
    return this.path.length > 0 ? this.path[this.path.length - 1]! : null;
  }

  /** Look up a cached document for a path, by default under the
   * current params (a different set may be passed, e.g. for a
   * side-by-side view in the other layout mode). */
  cached(
    path: readonly string[],
    params?: CloudParams,
  ): CloudDocument | undefined {
    return this.docs.get(cacheKey(path, params ?? this.params));
  }

  /** Record a fetched document for a path. */
  store(
    path: readonly string[],
    doc: CloudDocument,
    params?: CloudParams,
  ): void {
    const key = cacheKey(path, params ?? this.params);
    this.docs.delete(key);
    this.docs.set(key, doc);
    while (this.docs.size > this.capacity) {
      const oldest = this.docs.keys().next().value as string;
      this.docs.delete(oldest);
    }
  }

  /** Enter a tag: push it onto the breadcrumb. */
  push(tag: string): void {
    this.path.push(tag);
  }

  /** Leave the innermost tag: pop exactly one breadcrumb entry. */
  pop(): void {
    this.path.pop();
  }

  /** Jump to an arbitrary breadcrumb prefix (0 = root). */
  truncate(depth: number): void {
    this.path.length = Math.max(0, Math.min(depth, this.path.length));
  }

  /** Replace the request parameters; cached documents keyed by other
   * parameter sets remain available if the user switches back. */
  setParams(params: CloudParams): void {
    this.params = { ...params };
  }
}
