//! Reference type lists for `p = 3`, rank 3, used to compare computed
//! results against.

pub const CASE1: [[u32; 3]; 9] = [
    [2, 3, 9],
    [2, 12, 18],
    [2, 21, 27],
    [2, 30, 36],
    [2, 39, 45],
    [7, 12, 18],
    [10, 12, 18],
    [16, 30, 36],
    [19, 30, 36],
];

pub const CASE2: [[u32; 3]; 4] = [[2, 4, 6], [3, 4, 6], [3, 5, 9], [6, 8, 12]];

pub const CASE3: [[u32; 3]; 12] = [
    [2, 3, 5],
    [2, 6, 8],
    [3, 5, 7],
    [3, 6, 8],
    [4, 6, 8],
    [5, 6, 8],
    [6, 8, 10],
    [8, 12, 14],
    [12, 18, 20],
    [18, 24, 26],
    [21, 27, 29],
    [30, 36, 38],
];

pub const CASE4: [[u32; 3]; 2] = [[2, 3, 4], [2, 3, 6]];

pub const SURVIVORS: [[u32; 3]; 6] = [[2, 4, 6], [2, 6, 8], [3, 5, 7], [3, 6, 8], [6, 8, 10], [6, 8, 12]];

pub const QUASI_REGULAR: [[u32; 3]; 4] = [[2, 3, 4], [2, 3, 5], [3, 4, 6], [5, 6, 8]];

pub const STEENROD_ELIMINATED: [[u32; 3]; 8] = [
    [4, 6, 8],
    [3, 5, 9],
    [8, 12, 14],
    [10, 12, 18],
    [12, 18, 20],
    [2, 12, 18],
    [7, 12, 18],
    [2, 3, 6],
];

/// Types claimed to fall to the ψ-condition by machine search.
pub const PSI_CLAIMED: [[u32; 3]; 9] = [
    [2, 3, 9],
    [2, 21, 27],
    [2, 30, 36],
    [2, 39, 45],
    [16, 30, 36],
    [19, 30, 36],
    [18, 24, 26],
    [21, 27, 29],
    [30, 36, 38],
];

/// The complete list of rank-2 types at `p = 3`.
pub const RANK2: [[u32; 2]; 4] = [[2, 3], [2, 4], [2, 6], [6, 8]];

pub fn case_list(case: u8) -> &'static [[u32; 3]] {
    match case {
        1 => &CASE1,
        2 => &CASE2,
        3 => &CASE3,
        4 => &CASE4,
        _ => &[],
    }
}
