/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_configurator_free: (a: number, b: number) => void;
export const configurator_append: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const configurator_complete: (a: number, b: number, c: number) => [number, number];
export const configurator_inspect: (a: number, b: number, c: number) => [number, number, number, number];
export const configurator_new: (a: number, b: number) => [number, number, number];
export const configurator_reset: (a: number) => void;
export const configurator_setValue: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const configurator_state: (a: number) => [number, number];
export const configurator_undo: (a: number) => [number, number];
export const configurator_variables: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
