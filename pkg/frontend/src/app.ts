// The interactive teaching loop. State is a pure function of service
// responses: every transition is driven by a create/query/answer/result
// payload, and a reload resumes from the service's pending query and
// transcript. No learning logic lives in the client.

import {
  ApiError,
  ChartPoint,
  QueryView,
  ResultView,
  SessionApi,
  freshKey,
} from "./api.js";
import { renderChart } from "./chart.js";

export interface HistoryEntry {
  seq: number;
  chart: ChartPoint[];
  answer: 0 | 1;
}

export type Phase =
  | { name: "setup" }
  | { name: "asking"; sid: string; query: QueryView; history: HistoryEntry[] }
  | { name: "done"; sid: string; result: ResultView; history: HistoryEntry[] };

const SID_KEY = "predlearn.sid";

export function assignmentToChart(assignment: string[]): ChartPoint[] {
  return assignment.map((value, i) => ({ index: i + 1, value }));
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const child of children)
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  return node;
}

export class App {
  phase: Phase = { name: "setup" };
  error = "";
  busy = false;
  private drawn: number[] = [];
  // one idempotency key per query seq, so a network retry reuses the key
  private keys = new Map<number, string>();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SessionApi,
    private readonly storage: Storage,
  ) {}

  async init(): Promise<void> {
    const sid = this.storage.getItem(SID_KEY);
    if (sid) {
      try {
        await this.refresh(sid);
      } catch (e) {
        if (e instanceof ApiError && e.status === 404) {
          this.storage.removeItem(SID_KEY);
          this.phase = { name: "setup" };
        } else {
          this.error = String(e instanceof Error ? e.message : e);
        }
      }
    }
    this.render();
  }

  /** Re-derive the whole phase from the service: transcript gives the
   * history, query/result gives the position. */
  private async refresh(sid: string): Promise<void> {
    const transcript = await this.api.getTranscript(sid);
    const history: HistoryEntry[] = transcript.entries.map((e) => ({
      seq: e.seq,
      chart: assignmentToChart(e.assignment),
      answer: e.answer === 1 ? 1 : 0,
    }));
    try {
      const query = await this.api.getQuery(sid);
      this.phase = { name: "asking", sid, query, history };
    } catch (e) {
      if (e instanceof ApiError && e.status === 409) {
        const result = await this.api.getResult(sid);
        this.phase = { name: "done", sid, result, history };
      } else {
        throw e;
      }
    }
  }

  async startFromCsv(csv: string): Promise<void> {
    if (!csv.trim()) {
      this.error = "paste or upload a CSV with at least 2 points first";
      this.render();
      return;
    }
    await this.start(() => this.api.createPatternFromCsv(csv));
  }

  async startFromDrawn(): Promise<void> {
    if (this.drawn.length < 2) {
      this.error = "draw at least 2 points first";
      this.render();
      return;
    }
    await this.start(() => this.api.createPatternFromValues(this.drawn));
  }

  private async start(create: () => ReturnType<SessionApi["createPatternFromCsv"]>) {
    this.error = "";
    this.busy = true;
    this.render();
    try {
      const created = await create();
      this.storage.setItem(SID_KEY, created.id);
      this.keys.clear();
      if (created.query) {
        this.phase = { name: "asking", sid: created.id, query: created.query, history: [] };
      } else {
        await this.refresh(created.id);
      }
    } catch (e) {
      this.error = String(e instanceof Error ? e.message : e);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async answer(bit: 0 | 1): Promise<void> {
    if (this.phase.name !== "asking" || this.busy) return;
    const { sid, query, history } = this.phase;
    let key = this.keys.get(query.seq);
    if (!key) {
      key = freshKey();
      this.keys.set(query.seq, key);
    }
    this.error = "";
    this.busy = true;
    this.render();
    try {
      const resp = await this.api.postAnswer(sid, bit, key, query.seq);
      const entry: HistoryEntry = {
        seq: query.seq,
        chart: query.chart ?? assignmentToChart(query.assignment),
        answer: bit,
      };
      const next = [...history, entry];
      if (resp.status === "done" && resp.result) {
        this.phase = { name: "done", sid, result: resp.result, history: next };
      } else if (resp.query) {
        this.phase = { name: "asking", sid, query: resp.query, history: next };
      }
    } catch (e) {
      if (e instanceof ApiError && e.status === 409) {
        // someone else answered this seq (double click / second tab):
        // absorb the conflict by re-syncing with the service
        await this.refresh(sid);
      } else {
        this.error = String(e instanceof Error ? e.message : e);
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async exportTranscript(): Promise<string> {
    if (this.phase.name === "setup") return "";
    const transcript = await this.api.getTranscript(this.phase.sid);
    return JSON.stringify(transcript);
  }

  reset(): void {
    this.storage.removeItem(SID_KEY);
    this.phase = { name: "setup" };
    this.error = "";
    this.drawn = [];
    this.keys.clear();
    this.render();
  }

  // -- rendering ----------------------------------------------------------

  render(): void {
    this.root.replaceChildren();
    this.root.append(el("h1", {}, ["Pattern teacher"]));
    switch (this.phase.name) {
      case "setup":
        this.renderSetup();
        break;
      case "asking":
        this.renderAsking(this.phase);
        break;
      case "done":
        this.renderDone(this.phase);
        break;
    }
    if (this.error) {
      this.root.append(el("p", { class: "error", "data-role": "error" }, [this.error]));
    }
  }

  private renderSetup(): void {
    const intro = el("p", {}, [
      "Give one example chart of the shape you care about. ",
      "The service will then show you charts; say whether each one is your pattern.",
    ]);
    const csvBox = el("textarea", {
      "data-role": "csv-input",
      rows: "6",
      placeholder: "index,value\n1,5\n2,3\n3,4",
    });
    const fileInput = el("input", { type: "file", accept: ".csv,text/csv" });
    fileInput.addEventListener("change", () => {
      const file = fileInput.files?.[0];
      if (!file) return;
      file.text().then((text) => {
        csvBox.value = text;
      });
    });
    const startCsv = el("button", { "data-role": "start-csv" }, ["Start from CSV"]);
    startCsv.addEventListener("click", () => void this.startFromCsv(csvBox.value));

    const pad = this.buildDrawPad();
    const startDrawn = el("button", { "data-role": "start-drawn" }, [
      "Start from drawn points",
    ]);
    startDrawn.addEventListener("click", () => void this.startFromDrawn());
    const clear = el("button", {}, ["Clear drawing"]);
    clear.addEventListener("click", () => {
      this.drawn = [];
      this.render();
    });

    this.root.append(
      intro,
      el("section", { class: "card" }, [
        el("h2", {}, ["Upload or paste a CSV"]),
        csvBox,
        el("div", { class: "row" }, [fileInput, startCsv]),
      ]),
      el("section", { class: "card" }, [
        el("h2", {}, ["Or draw a chart"]),
        el("p", { class: "hint" }, ["Click to add points left to right."]),
        pad,
        el("p", { "data-role": "drawn-values" }, [
          this.drawn.length ? `points: ${this.drawn.join(", ")}` : "no points yet",
        ]),
        el("div", { class: "row" }, [startDrawn, clear]),
      ]),
    );
  }

  private buildDrawPad(): HTMLElement {
    const height = 120;
    const pad = el("div", { class: "drawpad", "data-role": "drawpad" });
    pad.style.height = `${height}px`;
    pad.addEventListener("click", (ev) => {
      const rect = pad.getBoundingClientRect();
      const y = ev.clientY - rect.top;
      const value = Math.max(0, Math.round((height - y) / 10));
      this.drawn.push(value);
      this.render();
    });
    return pad;
  }

  private renderAsking(phase: Extract<Phase, { name: "asking" }>): void {
    const { query } = phase;
    const points = query.chart ?? assignmentToChart(query.assignment);
    const yes = el("button", { "data-role": "answer-yes", class: "yes" }, [
      "This chart IS my pattern",
    ]);
    const no = el("button", { "data-role": "answer-no", class: "no" }, [
      "This chart is NOT my pattern",
    ]);
    if (this.busy) {
      yes.setAttribute("disabled", "");
      no.setAttribute("disabled", "");
    }
    yes.addEventListener("click", () => void this.answer(1));
    no.addEventListener("click", () => void this.answer(0));

    this.root.append(
      el("section", { class: "card" }, [
        el("h2", {}, ["Is this your pattern?"]),
        renderChart(points),
        el("div", { class: "row" }, [yes, no]),
        this.buildProgress(query),
      ]),
      this.buildHistory(phase.history),
    );
  }

  private buildProgress(query: QueryView): HTMLElement {
    const { queries, bound } = query.progress;
    const bar = el("div", { class: "bar" });
    const fill = el("div", { class: "fill" });
    fill.style.width = `${Math.min(100, (100 * queries) / bound)}%`;
    bar.append(fill);
    return el("div", { class: "progress" }, [
      bar,
      el("span", { "data-role": "progress" }, [`${queries} of at most ${bound} questions`]),
    ]);
  }

  private renderDone(phase: Extract<Phase, { name: "done" }>): void {
    const program = phase.result.program ?? "";
    const pre = el("pre", { "data-role": "program" }, [program]);
    const copy = el("button", { "data-role": "copy" }, ["Copy program"]);
    copy.addEventListener("click", () => {
      void navigator.clipboard?.writeText(program);
    });
    const download = el("button", { "data-role": "download" }, ["Download .dsl"]);
    download.addEventListener("click", () => downloadText("pattern.dsl", program));
    const exportBtn = el("button", { "data-role": "export-transcript" }, [
      "Export transcript JSON",
    ]);
    exportBtn.addEventListener("click", () => {
      void this.exportTranscript().then((text) =>
        downloadText("transcript.json", text),
      );
    });
    const again = el("button", { "data-role": "reset" }, ["Teach another pattern"]);
    again.addEventListener("click", () => this.reset());

    this.root.append(
      el("section", { class: "card" }, [
        el("h2", {}, ["Your pattern program"]),
        el("p", { "data-role": "query-count" }, [
          `learned in ${phase.result.query_count} questions`,
        ]),
        pre,
        el("div", { class: "row" }, [copy, download, exportBtn, again]),
      ]),
      this.buildHistory(phase.history),
    );
  }

  private buildHistory(history: HistoryEntry[]): HTMLElement {
    const section = el("section", { class: "card history", "data-role": "history" }, [
      el("h2", {}, ["Answered so far"]),
    ]);
    if (!history.length) {
      section.append(el("p", { class: "hint" }, ["nothing answered yet"]));
      return section;
    }
    for (const entry of history) {
      section.append(
        el("div", { class: "history-entry", "data-answer": String(entry.answer) }, [
          renderChart(entry.chart),
          el("span", { class: entry.answer ? "yes" : "no" }, [
            entry.answer ? "YES — my pattern" : "NO — not my pattern",
          ]),
        ]),
      );
    }
    return section;
  }
}

function downloadText(filename: string, text: string): void {
  const blob = new Blob([text], { type: "text/plain" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}
