/**
 * Pure UI state: every screen is a function of the latest service
 * response plus local upload state. Reducers never touch the DOM or
 * the network.
 */

import type { AssistantInfo, PreviewData, SessionResource } from "./api.js";

export type SlotBinding =
  | { kind: "file"; file: File }
  | { kind: "path"; path: string };

export interface BindingState {
  assistant: AssistantInfo;
  slots: Record<string, SlotBinding | null>;
  gazetteerPath: string;
  column: string;
}

export type AppState =
  | { screen: "loading" }
  | { screen: "gallery"; assistants: AssistantInfo[]; error: string | null }
  | { screen: "binding"; binding: BindingState; busy: boolean; error: string | null }
  | {
      screen: "session";
      resource: SessionResource;
      busy: boolean;
      notice: string | null;
      resultCsv: string | null;
    };

export type AppEvent =
  | { kind: "assistants-loaded"; assistants: AssistantInfo[] }
  | { kind: "load-failed"; message: string }
  | { kind: "assistant-picked"; assistant: AssistantInfo }
  | { kind: "slot-bound"; slot: string; binding: SlotBinding | null }
  | { kind: "gazetteer-set"; path: string }
  | { kind: "column-set"; column: string }
  | { kind: "request-started" }
  | { kind: "session-updated"; resource: SessionResource }
  | { kind: "result-loaded"; csv: string }
  | { kind: "stale-choice" }
  | { kind: "request-failed"; message: string }
  | { kind: "restart"; assistants: AssistantInfo[] };

export function initialState(): AppState {
  return { screen: "loading" };
}

function emptyBinding(assistant: AssistantInfo): BindingState {
  const slots: Record<string, SlotBinding | null> = {};
  for (const slot of assistant.input_slots) slots[slot] = null;
  return { assistant, slots, gazetteerPath: "", column: "" };
}

export function reduce(state: AppState, event: AppEvent): AppState {
  switch (event.kind) {
    case "assistants-loaded":
      return { screen: "gallery", assistants: event.assistants, error: null };
    case "load-failed":
      if (state.screen === "gallery") {
        return { ...state, error: event.message };
      }
      return { screen: "gallery", assistants: [], error: event.message };
    case "assistant-picked":
      return {
        screen: "binding",
        binding: emptyBinding(event.assistant),
        busy: false,
        error: null,
      };
    case "slot-bound": {
      if (state.screen !== "binding") return state;
      const slots = { ...state.binding.slots, [event.slot]: event.binding };
      return { ...state, binding: { ...state.binding, slots }, error: null };
    }
    case "gazetteer-set":
      if (state.screen !== "binding") return state;
      return { ...state, binding: { ...state.binding, gazetteerPath: event.path } };
    case "column-set":
      if (state.screen !== "binding") return state;
      return { ...state, binding: { ...state.binding, column: event.column } };
    case "request-started":
      if (state.screen === "binding" || state.screen === "session") {
        return { ...state, busy: true };
      }
      return state;
    case "session-updated":
      return {
        screen: "session",
        resource: event.resource,
        busy: false,
        notice: null,
        resultCsv: state.screen === "session" ? state.resultCsv : null,
      };
    case "result-loaded":
      if (state.screen !== "session") return state;
      return { ...state, resultCsv: event.csv, busy: false };
    case "stale-choice":
      if (state.screen !== "session") return state;
      return {
        ...state,
        busy: false,
        notice: "recommendation changed — list refreshed",
      };
    case "request-failed":
      if (state.screen === "binding") return { ...state, busy: false, error: event.message };
      if (state.screen === "session") return { ...state, busy: false, notice: event.message };
      return state;
    case "restart":
      return { screen: "gallery", assistants: event.assistants, error: null };
  }
}

/** Creation is enabled only once every declared slot is bound. */
export function requiredSlotsFilled(binding: BindingState): boolean {
  if (binding.assistant.id === "semantic-type" && !binding.gazetteerPath.trim()) {
    return false;
  }
  return binding.assistant.input_slots.every((slot) => binding.slots[slot] != null);
}

export function sessionConfig(binding: BindingState): Record<string, unknown> {
  const config: Record<string, unknown> = {};
  if (binding.assistant.id === "semantic-type" && binding.gazetteerPath.trim()) {
    config.gazetteer = binding.gazetteerPath.trim();
  }
  const configurable = ["type-infer", "semantic-type", "outlier"];
  if (configurable.includes(binding.assistant.id) && binding.column.trim()) {
    config.column = binding.column.trim();
  }
  return config;
}

/**
 * Cell-wise diff of the output preview against the raw input preview:
 * a cell is "changed" when its column exists in the input under the
 * same name and the value at that row differs. Inserted or renamed
 * columns produce no highlights.
 */
export function computeChangedCells(
  input: PreviewData | null,
  output: PreviewData | null,
): boolean[][] {
  if (!input || !output) return [];
  const inputIndex = new Map<string, number>();
  input.header.forEach((name, index) => {
    if (!inputIndex.has(name)) inputIndex.set(name, index);
  });
  return output.rows.map((row, rowIndex) =>
    row.map((cell, columnIndex) => {
      const name = output.header[columnIndex];
      if (name === undefined) return false;
      const source = inputIndex.get(name);
      if (source === undefined) return false;
      const inputRow = input.rows[rowIndex];
      if (inputRow === undefined) return false;
      return inputRow[source] !== cell;
    }),
  );
}

export function changedCellCount(diff: boolean[][]): number {
  return diff.reduce(
    (total, row) => total + row.reduce((n, changed) => n + (changed ? 1 : 0), 0),
    0,
  );
}
