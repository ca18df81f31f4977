/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const diagonal_3d: (a: number, b: number, c: number) => [number, number, number, number];
export const dispersion_1d: (a: number, b: number, c: number) => [number, number, number, number];
export const energy_bound_1d: (a: number, b: number) => [number, number, number];
export const energy_bound_3d: (a: number, b: number) => [number, number, number];
export const evolve_1d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
