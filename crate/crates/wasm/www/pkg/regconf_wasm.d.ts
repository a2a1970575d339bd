/* tslint:disable */
/* eslint-disable */

export class Configurator {
    free(): void;
    [Symbol.dispose](): void;
    append(variable: string, text: string): void;
    complete(variable: string): void;
    inspect(variable: string): string;
    constructor(problem_json: string);
    reset(): void;
    setValue(variable: string, text: string): void;
    /**
     * Form state as JSON.
     */
    state(): string;
    undo(): void;
    variables(): string[];
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_configurator_free: (a: number, b: number) => void;
    readonly configurator_append: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly configurator_complete: (a: number, b: number, c: number) => [number, number];
    readonly configurator_inspect: (a: number, b: number, c: number) => [number, number, number, number];
    readonly configurator_new: (a: number, b: number) => [number, number, number];
    readonly configurator_reset: (a: number) => void;
    readonly configurator_setValue: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly configurator_state: (a: number) => [number, number];
    readonly configurator_undo: (a: number) => [number, number];
    readonly configurator_variables: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
