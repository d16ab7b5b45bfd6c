import type { DocumentPayload, EdgeDocumentsResponse, TimelineBucket } from "./types.js";

function docItem(doc: DocumentPayload): HTMLElement {
    const item = document.createElement("li");
    item.className = "doc";
    item.setAttribute("data-doc-id", doc.id);
    const title = document.createElement("span");
    title.className = "doc-title";
    title.textContent = doc.title;
    const meta = document.createElement("span");
    meta.className = "doc-meta";
    meta.textContent = ` ${doc.source_name} · ${doc.published_at.slice(0, 10)}`;
    const body = document.createElement("p");
    body.className = "doc-body";
    body.hidden = true;
    body.textContent = doc.body;
    item.appendChild(title);
    item.appendChild(meta);
    item.appendChild(body);
    // clicking a document expands its full text
    title.addEventListener("click", () => {
        body.hidden = !body.hidden;
        item.classList.toggle("expanded", !body.hidden);
    });
    return item;
}

function docSection(heading: string, docs: DocumentPayload[], cssClass: string): HTMLElement {
    const section = document.createElement("section");
    section.className = cssClass;
    const h = document.createElement("h3");
    h.textContent = heading;
    const list = document.createElement("ul");
    for (const doc of docs) list.appendChild(docItem(doc));
    section.appendChild(h);
    section.appendChild(list);
    return section;
}

export class DocumentsPanel {
    constructor(private container: HTMLElement) {
        this.container.hidden = true;
    }

    show(payload: EdgeDocumentsResponse): void {
        this.container.replaceChildren();
        this.container.hidden = false;
        const heading = document.createElement("h2");
        heading.textContent = `Documents for "${payload.edge.relation}"`;
        this.container.appendChild(heading);
        if (payload.representative) {
            this.container.appendChild(
                docSection("Representative", [payload.representative], "representative"));
        }
        this.container.appendChild(
            docSection("Cluster members", payload.cluster_members, "members"));
        if (payload.related.length > 0) {
            this.container.appendChild(docSection("Related articles", payload.related, "related"));
        }
    }

    close(): void {
        this.container.hidden = true;
        this.container.replaceChildren();
    }

    get isOpen(): boolean {
        return !this.container.hidden;
    }
}

export class TimelinePanel {
    constructor(private container: HTMLElement) {}

    render(buckets: TimelineBucket[]): void {
        this.container.replaceChildren();
        if (buckets.length === 0) {
            const empty = document.createElement("p");
            empty.className = "empty-state";
            empty.textContent = "No documents matched.";
            this.container.appendChild(empty);
            return;
        }
        for (const bucket of buckets) {
            const day = document.createElement("section");
            day.className = "timeline-day";
            day.setAttribute("data-date", bucket.date);
            const h = document.createElement("h3");
            h.textContent = bucket.date;
            const list = document.createElement("ul");
            for (const doc of bucket.documents) list.appendChild(docItem(doc));
            day.appendChild(h);
            day.appendChild(list);
            this.container.appendChild(day);
        }
    }
}

export class ErrorBanner {
    private element: HTMLElement;

    constructor(container: HTMLElement) {
        this.element = document.createElement("div");
        this.element.className = "error-banner";
        this.element.hidden = true;
        const message = document.createElement("span");
        message.className = "error-message";
        const dismiss = document.createElement("button");
        dismiss.type = "button";
        dismiss.className = "dismiss";
        dismiss.textContent = "✕";
        dismiss.addEventListener("click", () => this.hide());
        this.element.appendChild(message);
        this.element.appendChild(dismiss);
        container.appendChild(this.element);
    }

    show(text: string): void {
        (this.element.querySelector(".error-message") as HTMLElement).textContent = text;
        this.element.hidden = false;
    }

    hide(): void {
        this.element.hidden = true;
    }

    get visible(): boolean {
        return !this.element.hidden;
    }
}
