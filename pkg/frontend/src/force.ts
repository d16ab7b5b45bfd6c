// Small force-directed layout: repulsion between all node pairs, springs
// along edges, and a centering pull. Runs a fixed number of synchronous
// ticks; plenty for the graph sizes this UI renders.

export interface LayoutNode {
    id: number;
    x: number;
    y: number;
    vx: number;
    vy: number;
}

export interface LayoutLink {
    source: number; // index into the node array
    target: number;
}

export interface LayoutOptions {
    width: number;
    height: number;
    ticks?: number;
    repulsion?: number;
    springLength?: number;
    springStrength?: number;
    centerStrength?: number;
    damping?: number;
}

export function runLayout(ids: number[], links: LayoutLink[], opts: LayoutOptions): LayoutNode[] {
    const {
        width,
        height,
        ticks = 200,
        repulsion = 4000,
        springLength = 90,
        springStrength = 0.04,
        centerStrength = 0.01,
        damping = 0.85,
    } = opts;
    const cx = width / 2;
    const cy = height / 2;
    const radius = Math.min(width, height) / 3;
    const nodes: LayoutNode[] = ids.map((id, i) => ({
        id,
        x: cx + radius * Math.cos((2 * Math.PI * i) / Math.max(ids.length, 1)),
        y: cy + radius * Math.sin((2 * Math.PI * i) / Math.max(ids.length, 1)),
        vx: 0,
        vy: 0,
    }));

    for (let t = 0; t < ticks; t++) {
        for (let i = 0; i < nodes.length; i++) {
            const a = nodes[i]!;
            for (let j = i + 1; j < nodes.length; j++) {
                const b = nodes[j]!;
                let dx = a.x - b.x;
                let dy = a.y - b.y;
                let d2 = dx * dx + dy * dy;
                if (d2 < 1) d2 = 1;
                const f = repulsion / d2;
                const d = Math.sqrt(d2);
                dx /= d;
                dy /= d;
                a.vx += dx * f;
                a.vy += dy * f;
                b.vx -= dx * f;
                b.vy -= dy * f;
            }
        }
        for (const link of links) {
            const a = nodes[link.source]!;
            const b = nodes[link.target]!;
            const dx = b.x - a.x;
            const dy = b.y - a.y;
            const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
            const f = springStrength * (d - springLength);
            a.vx += (dx / d) * f;
            a.vy += (dy / d) * f;
            b.vx -= (dx / d) * f;
            b.vy -= (dy / d) * f;
        }
        for (const n of nodes) {
            n.vx += (cx - n.x) * centerStrength;
            n.vy += (cy - n.y) * centerStrength;
            n.vx *= damping;
            n.vy *= damping;
            n.x += n.vx;
            n.y += n.vy;
            n.x = Math.min(Math.max(n.x, 20), width - 20);
            n.y = Math.min(Math.max(n.y, 20), height - 20);
        }
    }
    return nodes;
}
