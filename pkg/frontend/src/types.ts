// Payload shapes as served by the /api endpoints.

export type NodeType = "PERSON" | "ORG" | "LOCATION" | "COUNTRY" | "MISC";
export type SourceType = "news" | "social";

export const NODE_TYPES: NodeType[] = ["PERSON", "ORG", "LOCATION", "COUNTRY", "MISC"];
export const SOURCE_TYPES: SourceType[] = ["news", "social"];

export interface NodePayload {
    id: number;
    name: string;
    type: NodeType;
    aliases: string[];
    props: Record<string, string>;
    score: number;
}

export interface ProvenancePayload {
    doc_id: string;
    cluster_id: string;
    published_at: string;
    source_type: SourceType;
}

export interface EdgePayload {
    id: number;
    src: number;
    dst: number;
    relation: string;
    provenance: ProvenancePayload[];
    score: number;
}

export interface DocumentPayload {
    id: string;
    source_type: SourceType;
    source_name: string;
    url: string;
    title: string;
    body: string;
    published_at: string;
    score?: number;
}

export interface SearchResponse {
    query: string;
    page: number;
    page_size: number;
    nodes: NodePayload[];
    edges: EdgePayload[];
    documents: DocumentPayload[];
}

export interface TimelineBucket {
    date: string;
    documents: DocumentPayload[];
}

export interface EdgeDocumentsResponse {
    edge: EdgePayload;
    representative: DocumentPayload | null;
    cluster_members: DocumentPayload[];
    related: DocumentPayload[];
}
