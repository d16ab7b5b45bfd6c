import { NODE_TYPES, SOURCE_TYPES, type NodeType, type SourceType } from "./types.js";

export interface FilterState {
    types: Set<NodeType>;
    sources: Set<SourceType>;
}

export class FilterBar {
    private state: FilterState = {
        types: new Set(NODE_TYPES),
        sources: new Set(SOURCE_TYPES),
    };
    public onChange: (() => void) | null = null;

    constructor(container: HTMLElement) {
        container.appendChild(this.group("Node types", NODE_TYPES, "type", this.state.types));
        container.appendChild(this.group("Sources", SOURCE_TYPES, "source", this.state.sources));
    }

    private group<T extends string>(
        title: string,
        values: readonly T[],
        kind: string,
        active: Set<T>,
    ): HTMLElement {
        const wrap = document.createElement("fieldset");
        wrap.className = `filter-group filter-${kind}`;
        const legend = document.createElement("legend");
        legend.textContent = title;
        wrap.appendChild(legend);
        for (const value of values) {
            const label = document.createElement("label");
            const box = document.createElement("input");
            box.type = "checkbox";
            box.checked = true;
            box.setAttribute("data-filter-kind", kind);
            box.setAttribute("data-filter-value", value);
            box.addEventListener("change", () => {
                if (box.checked) active.add(value);
                else active.delete(value);
                this.onChange?.();
            });
            label.appendChild(box);
            label.appendChild(document.createTextNode(value));
            wrap.appendChild(label);
        }
        return wrap;
    }

    get current(): FilterState {
        return this.state;
    }
}
