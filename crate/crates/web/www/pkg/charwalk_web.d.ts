/* tslint:disable */
/* eslint-disable */

export class Tails {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `a_m(x)` for `m = 0 ..= m_max`.
     */
    empirical(): Float64Array;
    /**
     * Limiting tail `a^_m` for `m = 0 ..= m_max`.
     */
    limit(): Float64Array;
    /**
     * Mean of `f_eps(p)` over odd primes up to `x`.
     */
    readonly average: number;
    /**
     * `sum_{m <= m_max} a^_m`.
     */
    readonly cPartial: number;
    readonly piOdd: number;
}

export class Walk {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `S_0 .. S_p`.
     */
    sums(): Int32Array;
    readonly eventualTime: number;
    readonly firstPassage: number;
    readonly p: number;
    readonly pvRatio: number;
}

export function sixthMoments(x: number, ell: number): string[];

export function tails(x: number, m_max: number, eps: string): Tails;

export function walk(p: number, eps: string): Walk;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_tails_free: (a: number, b: number) => void;
    readonly __wbg_walk_free: (a: number, b: number) => void;
    readonly sixthMoments: (a: number, b: number) => [number, number, number, number];
    readonly tails: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly tails_average: (a: number) => number;
    readonly tails_cPartial: (a: number) => number;
    readonly tails_empirical: (a: number) => [number, number];
    readonly tails_limit: (a: number) => [number, number];
    readonly tails_piOdd: (a: number) => number;
    readonly walk: (a: number, b: number, c: number) => [number, number, number];
    readonly walk_eventualTime: (a: number) => number;
    readonly walk_firstPassage: (a: number) => number;
    readonly walk_p: (a: number) => number;
    readonly walk_sums: (a: number) => [number, number];
    readonly walk_pvRatio: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
