// Single-page triage panel: one form, one result panel, recent decisions.
//
// Display rules: ranked roles render exactly in wire order and confidences
// are shown as-received (percentage bars rounded to one decimal for the
// label, the raw value on hover) - never reordered, never renormalized.

import {
  ApiError,
  FeedbackEvent,
  RecommendResponse,
  TriageApi,
  newIdempotencyKey,
} from './api.js';

interface PendingDecision {
  projectId: string;
  title: string;
  response: RecommendResponse;
  idempotencyKey: string;
  decided: boolean;
}

export class TriageApp {
  private inFlight: AbortController | null = null;
  private current: PendingDecision | null = null;
  private sending = false;

  constructor(private root: HTMLElement, private api: TriageApi, private topK = 7) {
    this.render();
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  }

  private render(): void {
    this.root.innerHTML = `
      <form id="triage-form">
        <label>Project
          <input id="project-input" list="known-projects" required />
          <datalist id="known-projects"></datalist>
        </label>
        <label>Task title
          <input id="title-input" required />
        </label>
        <button id="submit-btn" type="submit">Recommend role</button>
      </form>
      <div id="message" hidden></div>
      <section id="result" hidden></section>
      <section id="history">
        <h2>Recent decisions</h2>
        <ul id="decisions"></ul>
      </section>
    `;
    this.el<HTMLFormElement>('#triage-form').addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.submitTask();
    });
    void this.loadProjects();
  }

  private async loadProjects(): Promise<void> {
    try {
      const models = await this.api.listModels();
      const ids = new Set<string>();
      for (const model of models.models) {
        for (const pid of model.projects ?? []) ids.add(pid);
      }
      const datalist = this.el<HTMLDataListElement>('#known-projects');
      datalist.innerHTML = '';
      for (const pid of [...ids].sort()) {
        const option = document.createElement('option');
        option.value = pid;
        datalist.appendChild(option);
      }
    } catch {
      // the selector stays a free-text input when the listing is unavailable
    }
  }

  private showMessage(text: string, kind: 'error' | 'banner' | 'info'): void {
    const box = this.el<HTMLDivElement>('#message');
    box.hidden = false;
    box.textContent = text;
    box.className = kind;
  }

  private clearMessage(): void {
    const box = this.el<HTMLDivElement>('#message');
    box.hidden = true;
    box.textContent = '';
    box.className = '';
  }

  async submitTask(): Promise<void> {
    const projectId = this.el<HTMLInputElement>('#project-input').value.trim();
    const title = this.el<HTMLInputElement>('#title-input').value.trim();
    if (!projectId || !title) return;
    this.inFlight?.abort(); // at most one in-flight recommend request
    const controller = new AbortController();
    this.inFlight = controller;
    this.clearMessage();
    try {
      const response = await this.api.recommend(projectId, title, this.topK, controller.signal);
      this.current = {
        projectId,
        title,
        response,
        idempotencyKey: newIdempotencyKey(),
        decided: false,
      };
      this.renderResult();
    } catch (err: unknown) {
      if (err instanceof DOMException && err.name === 'AbortError') return;
      if (err instanceof ApiError && err.status === 503) {
        this.showMessage('No model available yet - train one, then try again.', 'banner');
      } else if (err instanceof ApiError) {
        this.showMessage(`Request failed (${err.code}): ${err.message}`, 'error');
      } else {
        this.showMessage('Network error - the service did not respond.', 'error');
      }
    } finally {
      if (this.inFlight === controller) this.inFlight = null;
    }
  }

  private renderResult(): void {
    const current = this.current;
    if (!current) return;
    const { response } = current;
    const panel = this.el<HTMLElement>('#result');
    panel.hidden = false;

    const rows = response.alternatives
      .map((alt) => {
        const pct = (alt.confidence * 100).toFixed(1);
        const isChosen = alt.role === response.chosen;
        return `
          <li class="role-row${isChosen ? ' chosen' : ''}" data-role="${alt.role}">
            <span class="role-name">${alt.role}</span>
            ${isChosen ? '<span class="chosen-badge">chosen</span>' : ''}
            <span class="bar" style="width: ${alt.confidence * 100}%"></span>
            <span class="confidence-label" title="${alt.confidence}">${pct}%</span>
          </li>`;
      })
      .join('');
    const overrideOptions = response.alternatives
      .filter((alt) => alt.role !== response.chosen)
      .map((alt) => `<option value="${alt.role}">${alt.role}</option>`)
      .join('');

    panel.innerHTML = `
      ${response.fallback_applied ? '<span class="fallback-badge">fallback applied</span>' : ''}
      ${response.unknown_project ? '<span class="unknown-project">project unknown to the model; all roles considered</span>' : ''}
      <ol id="ranking">${rows}</ol>
      <div id="decision-controls">
        <button id="accept-btn" type="button">Accept ${response.chosen}</button>
        <select id="override-select">${overrideOptions}</select>
        <button id="override-btn" type="button">Override</button>
      </div>
      <footer id="model-version">model ${response.model_version}</footer>
    `;
    this.el<HTMLButtonElement>('#accept-btn').addEventListener('click', () => {
      void this.recordDecision(true);
    });
    this.el<HTMLButtonElement>('#override-btn').addEventListener('click', () => {
      const role = this.el<HTMLSelectElement>('#override-select').value;
      if (role) void this.recordDecision(false, role);
    });
  }

  async recordDecision(accepted: boolean, overrideRole?: string): Promise<void> {
    const current = this.current;
    if (!current || current.decided || this.sending) return;
    this.sending = true;
    const event: FeedbackEvent = {
      project_id: current.projectId,
      title: current.title,
      recommended_role: current.response.chosen,
      accepted,
      model_version: current.response.model_version,
      idempotency_key: current.idempotencyKey,
    };
    if (!accepted && overrideRole) event.override_role = overrideRole;
    try {
      await this.api.sendFeedback(event);
      current.decided = true;
      this.disableControls();
      this.addDecision(accepted ? `accepted ${event.recommended_role}` : `overrode to ${overrideRole}`, current);
      this.clearMessage();
    } catch {
      // same idempotency key on retry: the service cannot double-log it
      this.showRetry(accepted, overrideRole);
    } finally {
      this.sending = false;
    }
  }

  private disableControls(): void {
    for (const selector of ['#accept-btn', '#override-btn', '#override-select']) {
      this.el<HTMLButtonElement | HTMLSelectElement>(selector).disabled = true;
    }
  }

  private showRetry(accepted: boolean, overrideRole?: string): void {
    this.showMessage('Could not record the decision.', 'error');
    const box = this.el<HTMLDivElement>('#message');
    const retry = document.createElement('button');
    retry.id = 'retry-btn';
    retry.type = 'button';
    retry.textContent = 'Retry';
    retry.addEventListener('click', () => {
      void this.recordDecision(accepted, overrideRole);
    });
    box.appendChild(retry);
  }

  private addDecision(summary: string, decision: PendingDecision): void {
    const item = document.createElement('li');
    item.textContent = `[${decision.projectId}] "${decision.title}" - ${summary}`;
    this.el<HTMLUListElement>('#decisions').prepend(item);
  }
}

export function mountTriageApp(root: HTMLElement, baseUrl = ''): TriageApp {
  return new TriageApp(root, new TriageApi(baseUrl));
}
