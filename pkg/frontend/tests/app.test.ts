import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { mount, type App } from "../src/app.js";
import { makeFixtureServer, REPRESENTATIVE, type FixtureServer } from "./fixtureServer.js";

let server: FixtureServer;
let root: HTMLElement;
let app: App;

function setUp(options: { slowQuery?: string } = {}): void {
    server = makeFixtureServer(options);
    vi.stubGlobal("fetch", server.fetch);
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
    app = mount(root);
}

async function flush(times = 6): Promise<void> {
    for (let i = 0; i < times; i++) {
        await new Promise((resolve) => setTimeout(resolve, 0));
    }
}

async function search(query: string): Promise<void> {
    const input = root.querySelector<HTMLInputElement>(".search-input")!;
    input.value = query;
    input.dispatchEvent(new Event("input", { bubbles: true }));
    root.querySelector(".search-form")!.dispatchEvent(
        new Event("submit", { bubbles: true, cancelable: true }));
    await flush();
}

function renderedNodeNames(): string[] {
    return Array.from(root.querySelectorAll("[data-node-id] .node-label"))
        .map((el) => el.textContent ?? "");
}

function renderedEdgeIds(): string[] {
    return Array.from(root.querySelectorAll("[data-edge-id]"))
        .map((el) => el.getAttribute("data-edge-id") ?? "");
}

function toggleFilter(kind: string, value: string): void {
    const box = root.querySelector<HTMLInputElement>(
        `input[data-filter-kind="${kind}"][data-filter-value="${value}"]`)!;
    box.click();
}

beforeEach(() => setUp());
afterEach(() => vi.unstubAllGlobals());

describe("search submission", () => {
    it("renders at least one node for wuhan", async () => {
        await search("wuhan");
        expect(root.querySelectorAll("[data-node-id]").length).toBeGreaterThanOrEqual(1);
        expect(renderedNodeNames()).toContain("Wuhan");
    });

    it("renders first-degree edges with relation labels", async () => {
        await search("wuhan");
        expect(renderedEdgeIds()).toEqual(["1", "2", "3"]);
        const labels = Array.from(root.querySelectorAll(".edge-label"))
            .map((el) => el.textContent);
        expect(labels).toContain("in_country");
    });

    it("disables the submit button for an empty query", () => {
        const button = root.querySelector<HTMLButtonElement>(".search-submit")!;
        expect(button.disabled).toBe(true);
        const input = root.querySelector<HTMLInputElement>(".search-input")!;
        input.value = "wuhan";
        input.dispatchEvent(new Event("input", { bubbles: true }));
        expect(button.disabled).toBe(false);
        input.value = "   ";
        input.dispatchEvent(new Event("input", { bubbles: true }));
        expect(button.disabled).toBe(true);
    });

    it("shows a dismissible banner on API failure and keeps the old graph", async () => {
        await search("wuhan");
        const before = renderedNodeNames();
        await search("failq");
        const banner = root.querySelector<HTMLElement>(".error-banner")!;
        expect(banner.hidden).toBe(false);
        expect(banner.textContent).toContain("store exploded");
        expect(renderedNodeNames()).toEqual(before);
        banner.querySelector<HTMLButtonElement>(".dismiss")!.click();
        expect(banner.hidden).toBe(true);
    });

    it("renders the timeline buckets in ascending date order", async () => {
        await search("wuhan");
        const dates = Array.from(root.querySelectorAll(".timeline-day"))
            .map((el) => el.getAttribute("data-date"));
        expect(dates).toEqual(["2020-01-23", "2020-01-30"]);
    });

    it("expands a document's full text on click", async () => {
        await search("wuhan");
        const docEl = root.querySelector(`.timeline-day [data-doc-id="d1"]`)!;
        const body = docEl.querySelector<HTMLElement>(".doc-body")!;
        expect(body.hidden).toBe(true);
        docEl.querySelector<HTMLElement>(".doc-title")!.click();
        expect(body.hidden).toBe(false);
        expect(body.textContent).toContain("Full body text");
    });

    it("cancels an in-flight search when a newer one is submitted", async () => {
        setUp({ slowQuery: "slowpoke" });
        await search("slowpoke");
        await search("wuhan");
        await flush(20);
        const slow = server.log.filter((e) => e.url.searchParams.get("q") === "slowpoke"
            && e.url.pathname === "/api/search");
        expect(slow.length).toBe(1);
        expect(slow[0]!.aborted()).toBe(true);
        expect(renderedNodeNames()).toContain("Wuhan");
    });
});

describe("edge drill-down", () => {
    it("shows the representative document title first", async () => {
        await search("wuhan");
        root.querySelector<SVGGElement>('[data-edge-id="1"]')!
            .dispatchEvent(new Event("click", { bubbles: true }));
        await flush();
        const panel = root.querySelector<HTMLElement>(".documents-panel")!;
        expect(panel.hidden).toBe(false);
        const repTitle = panel.querySelector(".representative .doc-title")!;
        expect(repTitle.textContent).toBe(REPRESENTATIVE.title);
        const sections = Array.from(panel.querySelectorAll("section"))
            .map((s) => s.className);
        expect(sections).toEqual(["representative", "members", "related"]);
    });

    it("hides the related section when the list is empty", async () => {
        await search("wuhan");
        root.querySelector('[data-edge-id="3"]')!
            .dispatchEvent(new Event("click", { bubbles: true }));
        await flush();
        const panel = root.querySelector<HTMLElement>(".documents-panel")!;
        expect(panel.querySelector(".related")).toBeNull();
        expect(panel.querySelector(".members")).not.toBeNull();
    });

    it("toggles the panel closed on a second click of the same edge", async () => {
        await search("wuhan");
        const edge = root.querySelector('[data-edge-id="1"]')!;
        edge.dispatchEvent(new Event("click", { bubbles: true }));
        await flush();
        const panel = root.querySelector<HTMLElement>(".documents-panel")!;
        expect(panel.hidden).toBe(false);
        root.querySelector('[data-edge-id="1"]')!
            .dispatchEvent(new Event("click", { bubbles: true }));
        await flush();
        expect(panel.hidden).toBe(true);
    });

    it("shows a banner for an unknown edge", async () => {
        await search("wuhan");
        await app.onEdgeClick(999);
        await flush();
        expect(root.querySelector<HTMLElement>(".error-banner")!.hidden).toBe(false);
    });
});

describe("filters", () => {
    it("removes social-only edges when the social source is disabled", async () => {
        await search("wuhan");
        expect(renderedEdgeIds()).toContain("2");
        toggleFilter("source", "social");
        await flush();
        const ids = renderedEdgeIds();
        expect(ids).not.toContain("2"); // provenance is social-only
        expect(ids).toContain("1");
        expect(ids).toContain("3"); // news provenance keeps it
    });

    it("filters nodes by type and drops dangling edges", async () => {
        await search("wuhan");
        toggleFilter("type", "COUNTRY");
        await flush();
        expect(renderedNodeNames()).not.toContain("China");
        expect(renderedEdgeIds()).not.toContain("1");
    });

    it("never renders an item the active filters exclude", async () => {
        await search("wuhan");
        toggleFilter("type", "MISC");
        toggleFilter("source", "news");
        await flush();
        for (const el of Array.from(root.querySelectorAll("[data-node-type]"))) {
            expect(el.getAttribute("data-node-type")).not.toBe("MISC");
        }
        expect(renderedEdgeIds()).not.toContain("1");
    });

    it("shows the empty state when every type is disabled", async () => {
        await search("wuhan");
        for (const value of ["PERSON", "ORG", "LOCATION", "COUNTRY", "MISC"]) {
            toggleFilter("type", value);
        }
        await flush();
        expect(root.querySelectorAll("[data-node-id]").length).toBe(0);
        const empty = root.querySelector<HTMLElement>(".graph-panel .empty-state")!;
        expect(empty.hidden).toBe(false);
        expect(empty.textContent).toContain("disabled");
    });

    it("restores the graph when a filter is re-enabled", async () => {
        await search("wuhan");
        const before = renderedEdgeIds();
        toggleFilter("source", "social");
        await flush();
        toggleFilter("source", "social");
        await flush();
        expect(renderedEdgeIds()).toEqual(before);
    });
});
