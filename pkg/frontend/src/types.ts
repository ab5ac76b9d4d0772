/** Shapes of the JSON documents served by the cloud service. */

/** One rendered tag: display text, selection weight, and size bucket. */
export interface CloudEntry {
  tag: string;
  weight: number;
  bucket: number;
}

/**
 * A cloud document as served by /cloud and /cloud/{tag}.
 *
 * `rows` is the display order: one inner array per rendered row.  The
 * client must preserve this order exactly — no re-sorting, no filtering.
 */
export interface CloudDocument {
  mode: string;
  method: string;
  n: number;
  k: number;
  seed: number;
  corpus_digest: string;
  rows: CloudEntry[][];
}

/**
 * Parameters accepted by the cloud endpoints.
 *
 * Numeric fields may be held as strings: control values travel to the
 * service verbatim, and the service is the validator of record.
 */
export interface CloudParams {
  method: string;
  n: number | string;
  k: number | string;
  mode: string;
}

/** One resource hit under a tag. */
export interface ResourceEntry {
  resource: string;
  weight: number;
}

/** A page of resources for a tag, served by /tags/{tag}/resources. */
export interface ResourcePage {
  tag: string;
  total: number;
  limit: number;
  offset: number;
  resources: ResourceEntry[];
}

/** One co-occurring tag with its similarity value. */
export interface RelatedEntry {
  tag: string;
  value: number;
}

/** Related-tag listing served by /tags/{tag}/related. */
export interface RelatedList {
  tag: string;
  related: RelatedEntry[];
}

/** Service metadata served by /meta. */
export interface MetaInfo {
  digest: string;
  defaults: {
    method: string;
    n: number;
    k: number;
    mode: string;
  };
  corpus: {
    resources: number;
    tags: number;
    cells: number;
  };
  kernel_backend: string;
}

/** Error body returned by the service for 4xx responses. */
export interface ApiErrorBody {
  error: string;
  message: string;
  field?: string;
}
