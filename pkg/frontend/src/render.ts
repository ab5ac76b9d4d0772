import type {
  CloudDocument,
  RelatedList,
  ResourcePage,
} from "./types.js";

/** Font size (em) for a bucket: a fixed step per level keeps the scale
 * strictly increasing no matter how many buckets the service used. */
export function fontSizeEm(bucket: number): number {
  return 0.75 + 0.25 * (bucket - 1);
}

export interface CloudCallbacks {
  onTag: (tag: string) => void;
}

/**
 * Render a cloud document into an element.
 *
 * Produces one row element per document row and one anchor per entry, in
 * the document's own order — the renderer never sorts or filters.  An
 * empty cloud yields a placeholder instead of rows.
 */
export function renderCloud(
  doc: CloudDocument,
  callbacks: CloudCallbacks,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "cloud";
  container.dataset["mode"] = doc.mode;
  const total = doc.rows.reduce((acc, row) => acc + row.length, 0);
  if (total === 0) {
    const empty = document.createElement("p");
    empty.className = "cloud-empty";
    empty.textContent = "no tags";
    container.append(empty);
    return container;
  }
  for (const row of doc.rows) {
    const line = document.createElement("div");
    line.className = "cloud-row";
    for (const entry of row) {
      const anchor = document.createElement("a");
      anchor.className = `cloud-tag size-${entry.bucket}`;
      anchor.textContent = entry.tag;
      anchor.href = `#/${encodeURIComponent(entry.tag)}`;
      anchor.dataset["tag"] = entry.tag;
      anchor.style.fontSize = `${fontSizeEm(entry.bucket)}em`;
      anchor.title = `weight ${entry.weight}`;
      anchor.addEventListener("click", (event) => {
        event.preventDefault();
        callbacks.onTag(entry.tag);
      });
      line.append(anchor);
      line.append(document.createTextNode(" "));
    }
    container.append(line);
  }
  return container;
}

/**
 * Render the error panel shown when a cloud cannot be displayed
 * (malformed document or failed initial load), with a retry control.
 */
export function renderErrorPanel(
  message: string,
  onRetry: () => void,
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "error-panel";
  const text = document.createElement("p");
  text.className = "error-message";
  text.textContent = message;
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "error-retry";
  retry.textContent = "Retry";
  retry.addEventListener("click", () => onRetry());
  panel.append(text, retry);
  return panel;
}

/**
 * Render a transient, non-destructive notice (e.g. a failed drill-down
 * that left the previous view in place).
 */
export function renderBanner(message: string, onDismiss: () => void): HTMLElement {
  const banner = document.createElement("div");
  banner.className = "banner";
  const text = document.createElement("span");
  text.textContent = message;
  const dismiss = document.createElement("button");
  dismiss.type = "button";
  dismiss.className = "banner-dismiss";
  dismiss.textContent = "Dismiss";
  dismiss.addEventListener("click", () => onDismiss());
  banner.append(text, dismiss);
  return banner;
}

export interface BreadcrumbCallbacks {
  /** Navigate to the prefix of the path with `depth` entries (0 = root). */
  onJump: (depth: number) => void;
}

/** Render the breadcrumb trail: root plus one crumb per drilled tag. */
export function renderBreadcrumb(
  path: readonly string[],
  callbacks: BreadcrumbCallbacks,
): HTMLElement {
  const nav = document.createElement("nav");
  nav.className = "breadcrumb";
  const root = document.createElement("a");
  root.href = "#/";
  root.className = "crumb crumb-root";
  root.textContent = "all tags";
  root.addEventListener("click", (event) => {
    event.preventDefault();
    callbacks.onJump(0);
  });
  nav.append(root);
  path.forEach((tag, index) => {
    nav.append(document.createTextNode(" › "));
    const crumb = document.createElement("a");
    crumb.className = "crumb";
    crumb.textContent = tag;
    crumb.dataset["depth"] = String(index + 1);
    crumb.href = `#/${path
      .slice(0, index + 1)
      .map(encodeURIComponent)
      .join("/")}`;
    crumb.addEventListener("click", (event) => {
      event.preventDefault();
      callbacks.onJump(index + 1);
    });
    nav.append(crumb);
  });
  return nav;
}

/** Render the resource list for a tag: identifier and weight only. */
export function renderResources(page: ResourcePage): HTMLElement {
  const section = document.createElement("section");
  section.className = "resources";
  const heading = document.createElement("h3");
  heading.textContent = `resources tagged ${page.tag} (${page.total})`;
  section.append(heading);
  const list = document.createElement("ol");
  list.start = page.offset + 1;
  for (const entry of page.resources) {
    const item = document.createElement("li");
    const id = document.createElement("span");
    id.className = "resource-id";
    id.textContent = entry.resource;
    const weight = document.createElement("span");
    weight.className = "resource-weight";
    weight.textContent = String(entry.weight);
    item.append(id, document.createTextNode(" "), weight);
    list.append(item);
  }
  section.append(list);
  return section;
}

export interface RelatedCallbacks {
  onTag: (tag: string) => void;
}

/** Render the related-tags list with similarity values. */
export function renderRelated(
  related: RelatedList,
  callbacks: RelatedCallbacks,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "related";
  const heading = document.createElement("h3");
  heading.textContent = `related to ${related.tag}`;
  section.append(heading);
  const list = document.createElement("ul");
  for (const entry of related.related) {
    const item = document.createElement("li");
    const anchor = document.createElement("a");
    anchor.className = "related-tag";
    anchor.textContent = entry.tag;
    anchor.href = `#/${encodeURIComponent(entry.tag)}`;
    anchor.dataset["tag"] = entry.tag;
    anchor.addEventListener("click", (event) => {
      event.preventDefault();
      callbacks.onTag(entry.tag);
    });
    const value = document.createElement("span");
    value.className = "related-value";
    value.textContent = entry.value.toFixed(3);
    item.append(anchor, document.createTextNode(" "), value);
    list.append(item);
  }
  section.append(list);
  return section;
}
