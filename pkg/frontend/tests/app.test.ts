import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { App, formatHash, parseHash } from "../src/app.js";
import {
  DEFAULTS,
  docFor,
  domTags,
  makeService,
  until,
  type FakeService,
} from "./helpers.js";

async function mount(service: FakeService): Promise<{ app: App; root: HTMLElement }> {
  const root = document.createElement("div");
  document.body.append(root);
  const app = new App(root, { fetchImpl: service.fetchImpl });
  await app.start();
  await app.settled();
  return { app, root };
}

function clickTag(root: HTMLElement, tag: string): void {
  const anchor = [
    ...root.querySelectorAll<HTMLAnchorElement>(".cloud-slot a.cloud-tag"),
  ].find((a) => a.dataset["tag"] === tag);
  if (!anchor) {
    throw new Error(`no rendered anchor for tag ${tag}`);
  }
  anchor.click();
}

describe("hash round-trip", () => {
  it("parses and formats breadcrumb paths", () => {
    expect(parseHash("")).toEqual([]);
    expect(parseHash("#/")).toEqual([]);
    expect(parseHash("#/alpha")).toEqual(["alpha"]);
    expect(parseHash("#/alpha/beta")).toEqual(["alpha", "beta"]);
    expect(parseHash("#/c%2B%2B")).toEqual(["c++"]);
    expect(formatHash([])).toBe("#/");
    expect(formatHash(["c++", "x y"])).toBe("#/c%2B%2B/x%20y");
  });
});

describe("startup", () => {
  beforeEach(() => window.history.replaceState(null, "", "/"));
  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("loads defaults from /meta and renders the main cloud", async () => {
    const service = makeService();
    const { root } = await mount(service);
    expect(service.calls[0]!.path).toBe("/meta");
    // The first cloud request carries the service defaults verbatim.
    expect(service.cloudPaths()[0]).toBe("/cloud?method=d&n=95&k=12&mode=clustered");
    const form = root.querySelector<HTMLFormElement>("form.params")!;
    expect(form.querySelector<HTMLSelectElement>('select[name="method"]')!.value).toBe("d");
    expect(form.querySelector<HTMLInputElement>('input[name="n"]')!.value).toBe("95");
    expect(root.querySelector(".meta-slot")!.textContent).toContain("480 resources");
    expect(root.querySelector(".meta-slot")!.textContent).toContain("80 tags");
  });

  it("starts at the path encoded in the location hash", async () => {
    window.history.replaceState(null, "", "/#/delta");
    const service = makeService();
    const { app, root } = await mount(service);
    expect(app.state.path).toEqual(["delta"]);
    expect(domTags(root.querySelector(".cloud-slot")!)).not.toContain("delta");
  });

  it("shows a retrying error panel when the service is unreachable", async () => {
    const service = makeService();
    let down = true;
    const flaky = (url: string, init?: RequestInit) => {
      if (down) {
        return Promise.reject(new TypeError("fetch failed"));
      }
      return service.fetchImpl(url, init);
    };
    const root = document.createElement("div");
    document.body.append(root);
    const app = new App(root, { fetchImpl: flaky });
    await app.start();
    const panel = root.querySelector(".error-panel");
    expect(panel).not.toBeNull();
    expect(panel!.textContent).toContain("could not reach the service");

    down = false;
    root.querySelector<HTMLButtonElement>(".error-retry")!.click();
    await until(() => root.querySelectorAll(".cloud-slot a.cloud-tag").length > 0);
    await app.settled();
    expect(root.querySelector(".error-panel")).toBeNull();
  });
});

describe("parameter controls", () => {
  beforeEach(() => window.history.replaceState(null, "", "/"));
  afterEach(() => {
    document.body.innerHTML = "";
  });

  async function applyParams(
    root: HTMLElement,
    app: App,
    values: { method?: string; n?: string; k?: string; mode?: string },
  ): Promise<void> {
    const form = root.querySelector<HTMLFormElement>("form.params")!;
    if (values.method !== undefined) {
      form.querySelector<HTMLSelectElement>('select[name="method"]')!.value = values.method;
    }
    if (values.n !== undefined) {
      form.querySelector<HTMLInputElement>('input[name="n"]')!.value = values.n;
    }
    if (values.k !== undefined) {
      form.querySelector<HTMLInputElement>('input[name="k"]')!.value = values.k;
    }
    if (values.mode !== undefined) {
      form.querySelector<HTMLSelectElement>('select[name="mode"]')!.value = values.mode;
    }
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await app.settled();
  }

  it("sends control values verbatim as query parameters", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    await applyParams(root, app, { method: "c", n: "07", k: "3", mode: "alphabetical" });
    const last = service.cloudPaths().at(-1);
    expect(last).toBe("/cloud?method=c&n=07&k=3&mode=alphabetical");
    // Alphabetical mode arrives as a single sorted row.
    const rows = root.querySelectorAll(".cloud-slot .cloud-row");
    expect(rows.length).toBe(1);
    const tags = domTags(root.querySelector(".cloud-slot")!);
    expect(tags).toEqual([...tags].sort());
  });

  it("keeps the current view and reports rejected parameters", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    const shown = domTags(root.querySelector(".cloud-slot")!);
    await applyParams(root, app, { method: "z" });
    // Service answered 400; the old cloud is still on screen and the
    // banner carries the service's message and field.
    expect(domTags(root.querySelector(".cloud-slot")!)).toEqual(shown);
    const banner = root.querySelector(".banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("unknown selection method");
    expect(banner!.textContent).toContain("method");
  });

  it("re-renders under new parameters for the current path", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    clickTag(root, "alpha");
    await app.settled();
    await applyParams(root, app, { mode: "alphabetical" });
    const last = service.cloudPaths().at(-1);
    expect(last).toBe("/cloud/alpha?method=d&n=95&k=12&mode=alphabetical");
    expect(app.state.path).toEqual(["alpha"]);
  });
});

describe("drill-down and navigation", () => {
  beforeEach(() => window.history.replaceState(null, "", "/"));
  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("pushes one breadcrumb entry per drill and renders the side panels", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    clickTag(root, "gamma");
    await app.settled();
    expect(app.state.path).toEqual(["gamma"]);
    const crumbs = [...root.querySelectorAll(".breadcrumb-slot a")].map(
      (a) => a.textContent,
    );
    expect(crumbs).toEqual(["all tags", "gamma"]);
    // Side panels: resource identifiers with weights, and related tags.
    const resources = root.querySelector(".resources")!;
    expect(resources.textContent).toContain("resources tagged gamma (45)");
    const firstItem = resources.querySelector("li")!;
    expect(firstItem.querySelector(".resource-id")!.textContent).toBe("r-gamma-000");
    expect(firstItem.querySelector(".resource-weight")!.textContent).toBe("45");
    expect(root.querySelector(".related")).not.toBeNull();
    expect(service.subcloudPaths("gamma")).toHaveLength(1);
    expect(app.state.resourcePage?.tag).toBe("gamma");
    expect(app.state.resourcePage?.offset).toBe(0);
  });

  it("pages through resources without touching the cloud", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    clickTag(root, "delta");
    await app.settled();
    const cloudCalls = service.cloudPaths().length;
    root
      .querySelector<HTMLButtonElement>(".pager button:last-child")!
      .click();
    await app.settled();
    expect(root.querySelector(".pager span")!.textContent).toBe("21–40 of 45");
    expect(root.querySelector(".resources li .resource-id")!.textContent).toBe(
      "r-delta-020",
    );
    expect(app.state.resourcePage?.offset).toBe(20);
    expect(service.cloudPaths().length).toBe(cloudCalls);
  });

  it("leaves the current view intact when a drill-down fails", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    service.failTags.add("beta");
    const shown = domTags(root.querySelector(".cloud-slot")!);
    clickTag(root, "beta");
    await app.settled();
    // Non-destructive: same cloud, same path, but a visible banner.
    expect(domTags(root.querySelector(".cloud-slot")!)).toEqual(shown);
    expect(app.state.path).toEqual([]);
    const banner = root.querySelector(".banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("beta");
    // Dismissing clears it; a later successful drill works normally.
    root.querySelector<HTMLButtonElement>(".banner-dismiss")!.click();
    expect(root.querySelector(".banner")).toBeNull();
    service.failTags.delete("beta");
    clickTag(root, "beta");
    await app.settled();
    expect(app.state.path).toEqual(["beta"]);
  });

  it("cancels a pending sub-cloud fetch when another tag is clicked", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    service.holdTags.add("alpha");
    clickTag(root, "alpha");
    // While alpha's fetch hangs, click beta; the alpha request must be
    // aborted and beta's sub-cloud displayed.
    clickTag(root, "beta");
    await app.settled();
    service.release("alpha");
    await app.settled();
    expect(app.state.path).toEqual(["beta"]);
    expect(app.renderedModel()).toEqual(docFor("beta", DEFAULTS));
    const alphaCall = service.calls.find((c) => c.path.startsWith("/cloud/alpha"));
    expect(alphaCall).toBeDefined();
    expect(alphaCall!.signal?.aborted).toBe(true);
  });

  it("follows history traversal back to the previous level", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    clickTag(root, "alpha");
    await app.settled();
    clickTag(root, "beta");
    await app.settled();
    expect(app.state.path).toEqual(["alpha", "beta"]);
    window.history.back();
    await until(() => app.state.path.length === 1);
    await app.settled();
    expect(app.state.path).toEqual(["alpha"]);
    expect(app.renderedModel()).toEqual(docFor("alpha", DEFAULTS));
  });

  it("treats a malformed document as an error with retry", async () => {
    const service = makeService();
    service.malformedMain = true;
    const root = document.createElement("div");
    document.body.append(root);
    const app = new App(root, { fetchImpl: service.fetchImpl });
    await app.start();
    await app.settled();
    const panel = root.querySelector(".error-panel");
    expect(panel).not.toBeNull();
    expect(panel!.textContent).toContain("malformed cloud document");
    service.malformedMain = false;
    root.querySelector<HTMLButtonElement>(".error-retry")!.click();
    await app.settled();
    expect(root.querySelector(".error-panel")).toBeNull();
    expect(domTags(root.querySelector(".cloud-slot")!).length).toBeGreaterThan(0);
  });
});

describe("side-by-side mode comparison", () => {
  beforeEach(() => window.history.replaceState(null, "", "/"));
  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("shows the other layout mode next to the current one on demand", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    const compareSlot = root.querySelector<HTMLElement>(".compare-slot")!;
    expect(compareSlot.hidden).toBe(true);
    root.querySelector<HTMLButtonElement>(".compare-toggle")!.click();
    await app.settled();
    expect(compareSlot.hidden).toBe(false);
    expect(compareSlot.querySelector("h2")!.textContent).toBe("alphabetical view");
    const tags = domTags(compareSlot);
    expect(tags).toEqual([...tags].sort());
    const last = service.cloudPaths().at(-1);
    expect(last).toBe("/cloud?method=d&n=95&k=12&mode=alphabetical");
    // Toggling off clears the panel without another request.
    const calls = service.cloudPaths().length;
    root.querySelector<HTMLButtonElement>(".compare-toggle")!.click();
    await app.settled();
    expect(compareSlot.hidden).toBe(true);
    expect(service.cloudPaths().length).toBe(calls);
  });

  it("keeps the comparison in step while drilling down", async () => {
    const service = makeService();
    const { app, root } = await mount(service);
    root.querySelector<HTMLButtonElement>(".compare-toggle")!.click();
    await app.settled();
    clickTag(root, "alpha");
    await app.settled();
    const compareSlot = root.querySelector<HTMLElement>(".compare-slot")!;
    const tags = domTags(compareSlot);
    expect(tags).not.toContain("alpha");
    expect(tags).toEqual([...tags].sort());
    expect(service.cloudPaths().at(-1)).toBe(
      "/cloud/alpha?method=d&n=95&k=12&mode=alphabetical",
    );
  });
});
