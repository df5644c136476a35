//! Frozen reference data the regression suite checks computed artifacts
//! against: the 42-row icosahedral solution table (degree, genus, walls,
//! type), the expected counts, and the expected solution verdicts.

/// (row index, degree, genus, walls, type as a sorted label string)
pub const ICOSAHEDRAL_TABLE: [(usize, usize, i64, u32, &str); 42] = [
    (11, 2, 0, 2, "bbcc"),
    (12, 2, 0, 2, "bbdd"),
    (13, 2, 0, 2, "ccdd"),
    (14, 3, 0, 1, "bccd"),
    (15, 3, 0, 1, "bcdd"),
    (16, 4, 0, 2, "accc"),
    (17, 4, 0, 2, "addd"),
    (18, 4, 0, 2, "cccd"),
    (19, 4, 0, 2, "cddd"),
    (20, 5, 0, 1, "bbcd"),
    (21, 5, 0, 2, "ccdd"),
    (22, 6, 0, 1, "bccd"),
    (23, 6, 0, 1, "bcdd"),
    (24, 8, 0, 1, "accd"),
    (25, 8, 0, 1, "acdd"),
    (26, 9, 1, 2, "bccc"),
    (27, 9, 1, 2, "bddd"),
    (28, 10, 0, 2, "aacd"),
    (29, 10, 0, 2, "bbbc"),
    (30, 10, 0, 2, "bbbd"),
    (31, 10, 0, 3, "cccc"),
    (32, 10, 0, 3, "dddd"),
    (33, 12, 0, 0, "abcd"),
    (34, 12, 1, 1, "abcc"),
    (35, 12, 1, 1, "abdd"),
    (36, 12, 1, 1, "bbcd"),
    (37, 15, 1, 2, "bbbc"),
    (38, 15, 1, 2, "bbbd"),
    (39, 15, 1, 2, "bbcc"),
    (40, 15, 1, 2, "bbdd"),
    (41, 18, 1, 3, "bbbb"),
    (42, 20, 1, 1, "abbc"),
    (43, 20, 1, 1, "abbd"),
    (44, 20, 1, 3, "aacc"),
    (45, 20, 1, 3, "aadd"),
    (46, 24, 1, 2, "abbb"),
    (47, 30, 2, 2, "aabc"),
    (48, 30, 2, 2, "aabd"),
    (49, 36, 3, 3, "aabb"),
    (50, 40, 3, 3, "aaac"),
    (51, 40, 3, 3, "aaad"),
    (52, 72, 7, 3, "aaab"),
];

/// Conjugacy classes of generating triples of the binary icosahedral group.
pub const GENERATING_TRIPLE_CLASSES_2I: usize = 26688;

/// Total solution rows (10 degenerate + 42 listed).
pub const TOTAL_ROWS: usize = 52;
pub const DEGENERATE_ROWS: usize = 10;

/// The named orbit checks: (group, degrees with genus).
pub const KLEIN_ORBIT: (usize, i64) = (7, 0);
pub const DIHEDRAL20_ORBIT: (usize, i64) = (12, 1);
pub const DESSIN_237_ORBIT: (usize, i64) = (18, 1);
pub const VALENTINER_ORBITS: [(usize, i64); 3] = [(15, 1), (15, 1), (24, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDiff {
    pub index: usize,
    pub column: &'static str,
    pub expected: String,
    pub got: String,
}

/// Diff a computed table (list of rows 11..52 in order) against the golden
/// data; wall diffs are reported separately from the combinatorial
/// columns, which are convention-free.
pub fn diff_table(
    rows: &[crate::hurwitz::TableRow],
) -> (Vec<TableDiff>, Vec<TableDiff>) {
    let mut core_diffs = vec![];
    let mut walls_diffs = vec![];
    let listed: Vec<&crate::hurwitz::TableRow> =
        rows.iter().filter(|r| !r.degenerate).collect();
    if listed.len() != ICOSAHEDRAL_TABLE.len() {
        core_diffs.push(TableDiff {
            index: 0,
            column: "row count",
            expected: ICOSAHEDRAL_TABLE.len().to_string(),
            got: listed.len().to_string(),
        });
        return (core_diffs, walls_diffs);
    }
    for (row, (idx, deg, genus, walls, ty)) in listed.iter().zip(ICOSAHEDRAL_TABLE) {
        if row.degree != deg {
            core_diffs.push(TableDiff {
                index: idx,
                column: "degree",
                expected: deg.to_string(),
                got: row.degree.to_string(),
            });
        }
        if row.genus != genus {
            core_diffs.push(TableDiff {
                index: idx,
                column: "genus",
                expected: genus.to_string(),
                got: row.genus.to_string(),
            });
        }
        if row.type_string != ty {
            core_diffs.push(TableDiff {
                index: idx,
                column: "type",
                expected: ty.to_string(),
                got: row.type_string.clone(),
            });
        }
        if row.walls != walls {
            walls_diffs.push(TableDiff {
                index: idx,
                column: "walls",
                expected: walls.to_string(),
                got: row.walls.to_string(),
            });
        }
    }
    (core_diffs, walls_diffs)
}
