/**
 * Full-mode annotators are external commands, configured rather than linked
 * in. Each tool speaks a one-line-JSON protocol: requests go to stdin, one
 * object per line with an "id" field, and the tool answers with one object
 * per line echoing the id. Which lemmatizer or encoder to run is therefore
 * deployment configuration; this module only owns the plumbing and the error
 * reporting when a tool misbehaves.
 */

import { spawnSync } from "node:child_process";
import { readFileSync } from "node:fs";

import { ExportError } from "./schema.js";

export interface ToolsConfig {
  lemmatizer: string;
  encoder: string;
}

export function loadToolsConfig(path: string): ToolsConfig {
  let obj: any;
  try {
    obj = JSON.parse(readFileSync(path, "utf8"));
  } catch (e) {
    throw new ExportError(`cannot read tools config ${path}: ${(e as Error).message}`);
  }
  for (const tool of ["lemmatizer", "encoder"]) {
    if (typeof obj[tool] !== "string" || obj[tool] === "") {
      throw new ExportError(`tools config ${path} needs a ${tool} command`);
    }
  }
  return { lemmatizer: obj.lemmatizer, encoder: obj.encoder };
}

export function runTool(name: string, command: string, requests: { id: string }[]): Map<string, any> {
  const input = requests.map((r) => JSON.stringify(r)).join("\n") + "\n";
  const result = spawnSync(command, { shell: true, input, encoding: "utf8", maxBuffer: 256 * 1024 * 1024 });
  if (result.error) throw new ExportError(`${name} failed to start: ${result.error.message}`);
  if (result.status !== 0) {
    throw new ExportError(`${name} exited with status ${result.status}: ${result.stderr.trim().slice(0, 500)}`);
  }

  const responses = new Map<string, any>();
  for (const line of result.stdout.split("\n")) {
    if (line.trim() === "") continue;
    let obj: any;
    try {
      obj = JSON.parse(line);
    } catch {
      throw new ExportError(`${name} produced a non-JSON line: ${line.slice(0, 200)}`);
    }
    if (typeof obj.id !== "string") throw new ExportError(`${name} response is missing an id: ${line.slice(0, 200)}`);
    responses.set(obj.id, obj);
  }
  for (const r of requests) {
    if (!responses.has(r.id)) throw new ExportError(`${name} returned no response for ${JSON.stringify(r.id)}`);
  }
  return responses;
}
