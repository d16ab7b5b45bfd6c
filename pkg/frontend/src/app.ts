import { ApiClient } from "./api.js";
import { FilterBar } from "./filters.js";
import { GraphView } from "./graphView.js";
import { DocumentsPanel, ErrorBanner, TimelinePanel } from "./panels.js";
import type { EdgePayload, NodePayload, SearchResponse } from "./types.js";
import { NODE_TYPES, SOURCE_TYPES } from "./types.js";

interface Inflight {
    search?: AbortController;
    timeline?: AbortController;
    docs?: AbortController;
}

export class App {
    private graph: GraphView;
    private timeline: TimelinePanel;
    private docs: DocumentsPanel;
    private banner: ErrorBanner;
    private filters: FilterBar;
    private input: HTMLInputElement;
    private button: HTMLButtonElement;
    private inflight: Inflight = {};
    private lastQuery: string | null = null;
    private selectedEdge: number | null = null;

    constructor(root: HTMLElement, private api: ApiClient) {
        root.innerHTML = `
          <header class="topbar">
            <form class="search-form">
              <input type="search" class="search-input" placeholder="Search events, people, places…" />
              <button type="submit" class="search-submit" disabled>Search</button>
            </form>
          </header>
          <div class="banner-slot"></div>
          <aside class="filter-bar"></aside>
          <main class="layout">
            <section class="graph-panel"></section>
            <section class="timeline-panel"></section>
          </main>
          <section class="documents-panel"></section>
        `;
        this.banner = new ErrorBanner(root.querySelector(".banner-slot")!);
        this.filters = new FilterBar(root.querySelector(".filter-bar")!);
        this.graph = new GraphView(root.querySelector(".graph-panel")!);
        this.timeline = new TimelinePanel(root.querySelector(".timeline-panel")!);
        this.docs = new DocumentsPanel(root.querySelector(".documents-panel")!);

        this.input = root.querySelector(".search-input")!;
        this.button = root.querySelector(".search-submit")!;
        this.input.addEventListener("input", () => {
            this.button.disabled = this.input.value.trim() === "";
        });
        root.querySelector(".search-form")!.addEventListener("submit", (event) => {
            event.preventDefault();
            const query = this.input.value.trim();
            if (query) void this.submitSearch(query);
        });
        this.filters.onChange = () => {
            if (this.lastQuery !== null) void this.refreshGraph();
        };
        this.graph.onEdgeClick = (edgeId) => void this.onEdgeClick(edgeId);
    }

    // -- request plumbing ------------------------------------------------------

    private begin(panel: keyof Inflight): AbortController {
        this.inflight[panel]?.abort();
        const controller = new AbortController();
        this.inflight[panel] = controller;
        return controller;
    }

    private static isAbort(err: unknown): boolean {
        return err instanceof DOMException && err.name === "AbortError";
    }

    private filterParams(): { types: string[] | null; sources: string[] | null } | "empty" {
        const { types, sources } = this.filters.current;
        if (types.size === 0 || sources.size === 0) return "empty";
        return {
            types: types.size === NODE_TYPES.length ? null : [...types],
            sources: sources.size === SOURCE_TYPES.length ? null : [...sources],
        };
    }

    /** Defensive pass: never render an item the active filters exclude. */
    private applyFilters(resp: SearchResponse): { nodes: NodePayload[]; edges: EdgePayload[] } {
        const { types, sources } = this.filters.current;
        const nodes = resp.nodes.filter((n) => types.has(n.type));
        const kept = new Set(nodes.map((n) => n.id));
        const edges = resp.edges.filter(
            (e) =>
                kept.has(e.src) &&
                kept.has(e.dst) &&
                e.provenance.some((p) => sources.has(p.source_type)),
        );
        return { nodes, edges };
    }

    // -- actions ----------------------------------------------------------------

    async submitSearch(query: string): Promise<void> {
        this.lastQuery = query;
        await Promise.all([this.refreshGraph(), this.refreshTimeline(query)]);
    }

    private async refreshGraph(): Promise<void> {
        const query = this.lastQuery;
        if (query === null) return;
        const params = this.filterParams();
        if (params === "empty") {
            this.inflight.search?.abort();
            this.graph.render([], [], "All filters disabled — nothing to show.");
            return;
        }
        const request = this.begin("search");
        try {
            const resp = await this.api.search(query, params.types, params.sources,
                                               request.signal);
            if (request.signal.aborted) return; // a newer request superseded this one
            const { nodes, edges } = this.applyFilters(resp);
            this.banner.hide();
            this.graph.render(nodes, edges, "No matching entities.");
            this.graph.setSelectedEdge(this.selectedEdge);
        } catch (err) {
            if (App.isAbort(err)) return;
            this.banner.show(`Search failed: ${(err as Error).message}`);
        }
    }

    private async refreshTimeline(query: string): Promise<void> {
        const request = this.begin("timeline");
        try {
            const buckets = await this.api.timeline(query, request.signal);
            if (request.signal.aborted) return;
            this.timeline.render(buckets);
        } catch (err) {
            if (App.isAbort(err)) return;
            this.banner.show(`Timeline failed: ${(err as Error).message}`);
        }
    }

    async onEdgeClick(edgeId: number): Promise<void> {
        if (this.selectedEdge === edgeId && this.docs.isOpen) {
            this.docs.close();
            this.selectedEdge = null;
            this.graph.setSelectedEdge(null);
            return;
        }
        const request = this.begin("docs");
        try {
            const payload = await this.api.edgeDocuments(edgeId, request.signal);
            if (request.signal.aborted) return;
            this.selectedEdge = edgeId;
            this.graph.setSelectedEdge(edgeId);
            this.docs.show(payload);
        } catch (err) {
            if (App.isAbort(err)) return;
            this.banner.show(`Documents failed: ${(err as Error).message}`);
        }
    }
}

export function mount(root: HTMLElement, baseUrl = ""): App {
    return new App(root, new ApiClient(baseUrl));
}
