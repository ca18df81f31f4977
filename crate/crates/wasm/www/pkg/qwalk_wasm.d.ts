/* tslint:disable */
/* eslint-disable */

/**
 * 3-D Dirac walk along `p_x = p_y = p_z = p`. Rows of `[p, E0, E1, E2, E3]`.
 */
export function diagonal_3d(theta: number, mass_dt: number, n: number): Float64Array;

/**
 * 1-D Dirac walk dispersion on `n` aligned momenta. Rows of `[p, E0, E1]`.
 */
export function dispersion_1d(theta: number, mass_dt: number, n: number): Float64Array;

/**
 * `(π − 2θ) + mc²δt`, or `NaN` when the bound does not apply.
 */
export function energy_bound_1d(theta: number, mass_dt: number): number;

/**
 * `3(π − 2θ) + mc²δt`, or `NaN` when the bound does not apply.
 */
export function energy_bound_3d(theta: number, mass_dt: number): number;

/**
 * Gaussian packet on an `n`-site ring, centred at `n/4`, evolved `steps`
 * times. Rows of `n + 1` values: the centroid, then the site densities.
 */
export function evolve_1d(theta: number, mass_dt: number, n: number, p0: number, width: number, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly diagonal_3d: (a: number, b: number, c: number) => [number, number, number, number];
    readonly dispersion_1d: (a: number, b: number, c: number) => [number, number, number, number];
    readonly energy_bound_1d: (a: number, b: number) => [number, number, number];
    readonly energy_bound_3d: (a: number, b: number) => [number, number, number];
    readonly evolve_1d: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
