/**
 * End-to-end: the real UI driven against a live service process.
 *
 * Reproduces the broadband walkthrough (three "Don't match ... and
 * Nation" selections, then accept, then download a CSV whose Nation
 * column exists and is empty) and the one-click type-inference fix on
 * the ESA Amperage column.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/main";

const PORT = 8991;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");
const DATA = path.join(REPO, "tests", "data");

let service: ChildProcess;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/assistants`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  service = spawn("python3", ["-m", "wrangle.cli", "serve", "--port", String(PORT)], {
    cwd: REPO,
    stdio: "ignore",
  });
  await waitForService();
});

afterAll(() => {
  service?.kill();
});

function mountApp(): { app: App; mount: HTMLElement; downloads: string[] } {
  const mount = document.createElement("div");
  document.body.appendChild(mount);
  const downloads: string[] = [];
  const app = new App(new ApiClient(BASE), mount, (url) => downloads.push(url));
  return { app, mount, downloads };
}

function setPath(mount: HTMLElement, slot: string, value: string): void {
  const input = mount.querySelector<HTMLInputElement>(`[data-slot-path="${slot}"]`);
  expect(input, `path input for slot ${slot}`).not.toBeNull();
  input!.value = value;
  input!.dispatchEvent(new Event("change"));
}

function clickButton(mount: HTMLElement, selector: string): void {
  const button = mount.querySelector<HTMLButtonElement>(selector);
  expect(button, `button ${selector}`).not.toBeNull();
  expect(button!.disabled).toBe(false);
  button!.click();
}

function choiceLabels(mount: HTMLElement): string[] {
  return [...mount.querySelectorAll<HTMLButtonElement>("button.choice")].map(
    (b) => b.textContent ?? "",
  );
}

async function clickChoiceMatching(
  app: App,
  mount: HTMLElement,
  pattern: RegExp,
): Promise<void> {
  const labels = choiceLabels(mount);
  const position = labels.findIndex((label) => pattern.test(label));
  expect(position, `choice matching ${pattern} in:\n${labels.join("\n")}`).toBeGreaterThanOrEqual(0);
  const buttons = mount.querySelectorAll<HTMLButtonElement>("button.choice");
  buttons[position]!.click();
  await app.whenIdle();
}

describe("broadband merge flow", () => {
  it("three Don't-match selections end in an insert, accept downloads the CSV", async () => {
    const { app, mount, downloads } = mountApp();
    await app.start();

    clickButton(mount, '[data-assistant="datadiff"]');
    setPath(mount, "input", path.join(DATA, "broadband_2014.csv"));
    setPath(mount, "reference", path.join(DATA, "broadband_215.csv"));
    clickButton(mount, '[data-action="create"]');
    await app.whenIdle();

    expect(app.state.screen).toBe("session");
    for (const partner of ["LLU", "Urban.rural", "Technology"]) {
      await clickChoiceMatching(
        app,
        mount,
        new RegExp(`^Don't match ${partner.replace(".", "\\.")} and Nation$`),
      );
    }

    const script = mount.querySelector('[data-role="expression-script"]')!.textContent!;
    expect(script).toMatch(/insert\(6\)/);

    const chips = [...mount.querySelectorAll(".chip")].map((c) => c.textContent);
    expect(chips).toHaveLength(3);
    expect(chips[0]).toBe("Don't match LLU and Nation");

    clickButton(mount, '[data-action="accept"]');
    await app.whenIdle();
    expect(app.state.screen).toBe("session");
    if (app.state.screen !== "session") return;
    expect(app.state.resource.status).toBe("accepted");

    const csv = app.state.resource.session_id
      ? await new ApiClient(BASE).fetchResult(app.state.resource.session_id)
      : "";
    const lines = csv.trim().split("\n");
    const header = lines[0]!.split(",");
    const nation = header.indexOf("Nation");
    expect(nation).toBeGreaterThanOrEqual(0);
    for (const line of lines.slice(1)) {
      expect(line.split(",")[nation]).toBe("");
    }

    clickButton(mount, '[data-action="download"]');
    expect(downloads).toHaveLength(1);
    expect(downloads[0]).toContain("/result");
  });
});

describe("type inference flow", () => {
  it("one click on 'column is not boolean' re-renders a float badge", async () => {
    const { app, mount } = mountApp();
    await app.start();

    clickButton(mount, '[data-assistant="type-infer"]');
    setPath(mount, "input", path.join(DATA, "esa_amperage.csv"));
    clickButton(mount, '[data-action="create"]');
    await app.whenIdle();

    const badge = mount.querySelector(".badge");
    expect(badge?.textContent).toMatch(/^boolean/);

    await clickChoiceMatching(app, mount, /^column is not boolean$/);

    const updated = mount.querySelector(".badge");
    expect(updated?.textContent).toMatch(/^float/);
    expect(updated?.textContent).toMatch(/missing: 10/);
  });
});

describe("stale handling", () => {
  it("accepted sessions refuse further choices with the refresh notice", async () => {
    const { app, mount } = mountApp();
    await app.start();
    clickButton(mount, '[data-assistant="csv-dialect"]');
    setPath(mount, "input", path.join(DATA, "json_cells.csv"));
    clickButton(mount, '[data-action="create"]');
    await app.whenIdle();

    if (app.state.screen !== "session") throw new Error("expected session");
    const sessionId = app.state.resource.session_id;
    // another client accepts the session behind the UI's back
    await new ApiClient(BASE).accept(sessionId);

    await clickChoiceMatching(app, mount, /as the delimiter$/);
    if (app.state.screen !== "session") throw new Error("expected session");
    expect(app.state.resource.status).toBe("accepted");
  });
});
