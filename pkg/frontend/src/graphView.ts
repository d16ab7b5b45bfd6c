import { runLayout, type LayoutLink } from "./force.js";
import type { EdgePayload, NodePayload, NodeType } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const TYPE_COLORS: Record<NodeType, string> = {
    PERSON: "#e4572e",
    ORG: "#4c8bf5",
    LOCATION: "#2ca02c",
    COUNTRY: "#17a2b8",
    MISC: "#9c9c9c",
};

export class GraphView {
    private svg: SVGSVGElement;
    private emptyState: HTMLElement;
    private width = 720;
    private height = 480;
    public onEdgeClick: ((edgeId: number) => void) | null = null;
    private selectedEdge: number | null = null;

    constructor(private container: HTMLElement) {
        this.svg = document.createElementNS(SVG_NS, "svg");
        this.svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
        this.svg.classList.add("graph-canvas");
        this.emptyState = document.createElement("p");
        this.emptyState.className = "empty-state";
        this.emptyState.hidden = true;
        container.appendChild(this.svg);
        container.appendChild(this.emptyState);
    }

    setSelectedEdge(edgeId: number | null): void {
        this.selectedEdge = edgeId;
        for (const line of Array.from(this.svg.querySelectorAll("[data-edge-id]"))) {
            line.classList.toggle(
                "selected",
                edgeId !== null && line.getAttribute("data-edge-id") === String(edgeId),
            );
        }
    }

    render(nodes: NodePayload[], edges: EdgePayload[], emptyMessage: string): void {
        while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);
        if (nodes.length === 0) {
            this.emptyState.textContent = emptyMessage;
            this.emptyState.hidden = false;
            return;
        }
        this.emptyState.hidden = true;

        const indexOf = new Map(nodes.map((n, i) => [n.id, i]));
        const links: LayoutLink[] = edges.map((e) => ({
            source: indexOf.get(e.src)!,
            target: indexOf.get(e.dst)!,
        }));
        const placed = runLayout(nodes.map((n) => n.id), links, {
            width: this.width,
            height: this.height,
        });
        const pos = new Map(placed.map((p) => [p.id, p]));

        for (const edge of edges) {
            const a = pos.get(edge.src)!;
            const b = pos.get(edge.dst)!;
            const group = document.createElementNS(SVG_NS, "g");
            group.setAttribute("data-edge-id", String(edge.id));
            group.classList.add("edge");
            if (edge.id === this.selectedEdge) group.classList.add("selected");
            const line = document.createElementNS(SVG_NS, "line");
            line.setAttribute("x1", a.x.toFixed(1));
            line.setAttribute("y1", a.y.toFixed(1));
            line.setAttribute("x2", b.x.toFixed(1));
            line.setAttribute("y2", b.y.toFixed(1));
            const label = document.createElementNS(SVG_NS, "text");
            label.setAttribute("x", ((a.x + b.x) / 2).toFixed(1));
            label.setAttribute("y", ((a.y + b.y) / 2 - 4).toFixed(1));
            label.classList.add("edge-label");
            label.textContent = edge.relation;
            group.appendChild(line);
            group.appendChild(label);
            group.addEventListener("click", () => this.onEdgeClick?.(edge.id));
            this.svg.appendChild(group);
        }

        for (const node of nodes) {
            const p = pos.get(node.id)!;
            const group = document.createElementNS(SVG_NS, "g");
            group.setAttribute("data-node-id", String(node.id));
            group.setAttribute("data-node-type", node.type);
            group.classList.add("node");
            const circle = document.createElementNS(SVG_NS, "circle");
            circle.setAttribute("cx", p.x.toFixed(1));
            circle.setAttribute("cy", p.y.toFixed(1));
            circle.setAttribute("r", node.score > 0 ? "10" : "6");
            circle.setAttribute("fill", TYPE_COLORS[node.type] ?? TYPE_COLORS.MISC);
            const label = document.createElementNS(SVG_NS, "text");
            label.setAttribute("x", (p.x + 12).toFixed(1));
            label.setAttribute("y", (p.y + 4).toFixed(1));
            label.classList.add("node-label");
            label.textContent = node.name;
            group.appendChild(circle);
            group.appendChild(label);
            this.svg.appendChild(group);
        }
    }
}
