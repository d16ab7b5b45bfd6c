import type { EdgeDocumentsResponse, SearchResponse, TimelineBucket } from "./types.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(url, { signal });
    if (!resp.ok) {
        let detail = `HTTP ${resp.status}`;
        try {
            const body = (await resp.json()) as { error?: string };
            if (body.error) detail = body.error;
        } catch {
            // non-JSON error body: keep the status text
        }
        throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
}

export class ApiClient {
    constructor(private baseUrl: string = "") {}

    search(
        query: string,
        types: string[] | null,
        sources: string[] | null,
        signal?: AbortSignal,
    ): Promise<SearchResponse> {
        const params = new URLSearchParams({ q: query });
        if (types !== null) params.set("types", types.join(","));
        if (sources !== null) params.set("sources", sources.join(","));
        return getJson(`${this.baseUrl}/api/search?${params}`, signal);
    }

    timeline(query: string, signal?: AbortSignal): Promise<TimelineBucket[]> {
        const params = new URLSearchParams({ q: query });
        return getJson(`${this.baseUrl}/api/timeline?${params}`, signal);
    }

    edgeDocuments(edgeId: number, signal?: AbortSignal): Promise<EdgeDocumentsResponse> {
        return getJson(`${this.baseUrl}/api/edges/${edgeId}/documents`, signal);
    }
}
