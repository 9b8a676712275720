/**
 * Typed client for the wrangle session service. The UI talks to the
 * backend exclusively through this module.
 */

export interface AssistantInfo {
  id: string;
  display_name: string;
  input_slots: string[];
  constraint_grammar_id: string;
}

export interface PreviewData {
  header: string[];
  rows: string[][];
  annotations: (string | null)[] | null;
}

export interface ChoiceItem {
  index: number;
  label: string;
}

export interface SessionResource {
  session_id: string;
  assistant: string;
  status: "active" | "accepted";
  history: string[];
  constraints: string[];
  expression_script: string;
  preview: PreviewData | null;
  input_preview: PreviewData | null;
  choices: ChoiceItem[];
  score: number | null;
  warnings?: string[];
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: string };
    if (body.error) message = body.error;
  } catch {
    // not JSON; keep the status text
  }
  throw new ApiError(response.status, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async listAssistants(): Promise<AssistantInfo[]> {
    const response = await fetch(this.url("/assistants"));
    if (!response.ok) return parseError(response);
    return (await response.json()) as AssistantInfo[];
  }

  /**
   * Create a session. Slots bound to File objects are uploaded as
   * multipart form data; slots bound to strings reference server-side
   * paths and travel as JSON.
   */
  async createSession(
    assistantId: string,
    bindings: Record<string, File | string>,
    config: Record<string, unknown> = {},
  ): Promise<SessionResource> {
    const files = Object.entries(bindings).filter(([, v]) => v instanceof File);
    let response: Response;
    if (files.length > 0) {
      const form = new FormData();
      form.append("assistant", assistantId);
      form.append("config", JSON.stringify(config));
      for (const [slot, value] of Object.entries(bindings)) {
        if (value instanceof File) {
          form.append(slot, value, value.name);
        } else {
          form.append("binding", `${slot}=${value}`);
        }
      }
      response = await fetch(this.url("/sessions"), { method: "POST", body: form });
    } else {
      response = await fetch(this.url("/sessions"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ assistant: assistantId, bindings, config }),
      });
    }
    if (!response.ok) return parseError(response);
    return (await response.json()) as SessionResource;
  }

  async getSession(sessionId: string): Promise<SessionResource> {
    const response = await fetch(this.url(`/sessions/${sessionId}`));
    if (!response.ok) return parseError(response);
    return (await response.json()) as SessionResource;
  }

  async postChoice(sessionId: string, index: number): Promise<SessionResource> {
    const response = await fetch(this.url(`/sessions/${sessionId}/choice`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ index }),
    });
    if (!response.ok) return parseError(response);
    return (await response.json()) as SessionResource;
  }

  async accept(sessionId: string): Promise<SessionResource> {
    const response = await fetch(this.url(`/sessions/${sessionId}/accept`), {
      method: "POST",
    });
    if (!response.ok) return parseError(response);
    return (await response.json()) as SessionResource;
  }

  resultUrl(sessionId: string): string {
    return this.url(`/sessions/${sessionId}/result`);
  }

  async fetchResult(sessionId: string): Promise<string> {
    const response = await fetch(this.resultUrl(sessionId));
    if (!response.ok) return parseError(response);
    return await response.text();
  }
}
