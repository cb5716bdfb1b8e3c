/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_tails_free: (a: number, b: number) => void;
export const __wbg_walk_free: (a: number, b: number) => void;
export const sixthMoments: (a: number, b: number) => [number, number, number, number];
export const tails: (a: number, b: number, c: number, d: number) => [number, number, number];
export const tails_average: (a: number) => number;
export const tails_cPartial: (a: number) => number;
export const tails_empirical: (a: number) => [number, number];
export const tails_limit: (a: number) => [number, number];
export const tails_piOdd: (a: number) => number;
export const walk: (a: number, b: number, c: number) => [number, number, number];
export const walk_eventualTime: (a: number) => number;
export const walk_firstPassage: (a: number) => number;
export const walk_p: (a: number) => number;
export const walk_sums: (a: number) => [number, number];
export const walk_pvRatio: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
