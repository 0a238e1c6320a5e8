//! Bibliographic tables: the author-paper map and the citation table,
//! in the documented column layout (AuPapMat: idxAu, idxPap, year, journal;
//! PapPapMat: FromPap, ToPap, FromYear, ToYear, SelfCite).
//!
//! Files are tab- or comma-separated UTF-8 with a header row. Malformed rows
//! abort with the offending line number by default; the permissive flag
//! skips and counts them instead.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AuthorPaperRow {
    pub author: i64,
    pub paper: i64,
    pub year: i32,
    pub journal: String,
}

#[derive(Debug, Clone, Default)]
pub struct AuthorPaperTable {
    pub rows: Vec<AuthorPaperRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CitationRow {
    pub from_paper: i64,
    pub to_paper: i64,
    pub from_year: i32,
    pub to_year: i32,
    pub self_cite: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CitationTable {
    pub rows: Vec<CitationRow>,
}

/// Parsing behavior and the accepted year range.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub permissive: bool,
    pub year_range: (i32, i32),
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { permissive: false, year_range: (1975, 2015) }
    }
}

/// Row counts, id ranges, and anomalies gathered while reading one table.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct TableReport {
    pub rows_read: usize,
    pub rows_kept: usize,
    pub rows_skipped: usize,
    pub distinct_authors: usize,
    pub distinct_papers: usize,
    pub author_id_range: Option<(i64, i64)>,
    pub paper_id_range: Option<(i64, i64)>,
    /// Citations whose source predates the target (in-press and similar);
    /// these rows are kept.
    pub inverted_year_citations: usize,
    pub anomalies: Vec<String>,
}

fn split_fields(line: &str) -> Vec<&str> {
    let delim = if line.contains('\t') { '\t' } else { ',' };
    line.split(delim).map(str::trim).collect()
}

fn header_positions(
    path: &str,
    fields: &[&str],
    wanted: &[&str],
) -> Result<Vec<usize>> {
    let lowered: Vec<String> = fields.iter().map(|f| f.to_lowercase()).collect();
    wanted
        .iter()
        .map(|w| {
            lowered
                .iter()
                .position(|f| f == &w.to_lowercase())
                .ok_or_else(|| Error::parse(path, 1, format!("missing column '{w}' in header")))
        })
        .collect()
}

/// Read the author-paper table. Duplicate (author, paper) pairs and years
/// outside the configured range are malformed rows.
pub fn read_author_paper(
    path: impl AsRef<Path>,
    opts: &ParseOptions,
) -> Result<(AuthorPaperTable, TableReport)> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&display, e))?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::io(&display, e))?,
        None => return Err(Error::parse(&display, 1, "empty file")),
    };
    let cols = header_positions(&display, &split_fields(&header), &["idxAu", "idxPap", "year", "journal"])?;

    let mut table = AuthorPaperTable::default();
    let mut report = TableReport::default();
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(&display, e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.rows_read += 1;
        let lineno = lineno + 1;
        let mut bad = |msg: String| -> Result<()> {
            if opts.permissive {
                report.rows_skipped += 1;
                report.anomalies.push(format!("line {lineno}: {msg}"));
                Ok(())
            } else {
                Err(Error::parse(&display, lineno, msg))
            }
        };
        let fields = split_fields(&line);
        if fields.len() <= *cols.iter().max().unwrap() {
            bad(format!("expected at least {} fields", cols.iter().max().unwrap() + 1))?;
            continue;
        }
        let author: i64 = match fields[cols[0]].parse() {
            Ok(v) => v,
            Err(_) => {
                bad(format!("bad author id '{}'", fields[cols[0]]))?;
                continue;
            }
        };
        let paper: i64 = match fields[cols[1]].parse() {
            Ok(v) => v,
            Err(_) => {
                bad(format!("bad paper id '{}'", fields[cols[1]]))?;
                continue;
            }
        };
        let year: i32 = match fields[cols[2]].parse() {
            Ok(v) => v,
            Err(_) => {
                bad(format!("bad year '{}'", fields[cols[2]]))?;
                continue;
            }
        };
        if year < opts.year_range.0 || year > opts.year_range.1 {
            bad(format!(
                "year {year} outside configured range {}-{}",
                opts.year_range.0, opts.year_range.1
            ))?;
            continue;
        }
        if let Some(&first) = seen.get(&(author, paper)) {
            bad(format!("duplicate (author, paper) pair first seen on line {first}"))?;
            continue;
        }
        seen.insert((author, paper), lineno);
        table.rows.push(AuthorPaperRow { author, paper, year, journal: fields[cols[3]].to_string() });
        report.rows_kept += 1;
    }

    let mut authors: Vec<i64> = table.rows.iter().map(|r| r.author).collect();
    authors.sort_unstable();
    authors.dedup();
    let mut papers: Vec<i64> = table.rows.iter().map(|r| r.paper).collect();
    papers.sort_unstable();
    papers.dedup();
    report.distinct_authors = authors.len();
    report.distinct_papers = papers.len();
    report.author_id_range = authors.first().map(|&lo| (lo, *authors.last().unwrap()));
    report.paper_id_range = papers.first().map(|&lo| (lo, *papers.last().unwrap()));
    Ok((table, report))
}

/// Read the citation table. Duplicate (from, to) pairs are malformed;
/// citations whose source predates the target are kept but counted as
/// anomalies.
pub fn read_citations(
    path: impl AsRef<Path>,
    opts: &ParseOptions,
) -> Result<(CitationTable, TableReport)> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&display, e))?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::io(&display, e))?,
        None => return Err(Error::parse(&display, 1, "empty file")),
    };
    let cols = header_positions(
        &display,
        &split_fields(&header),
        &["FromPap", "ToPap", "FromYear", "ToYear", "SelfCite"],
    )?;

    let mut table = CitationTable::default();
    let mut report = TableReport::default();
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(&display, e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.rows_read += 1;
        let lineno = lineno + 1;
        let mut bad = |msg: String| -> Result<()> {
            if opts.permissive {
                report.rows_skipped += 1;
                report.anomalies.push(format!("line {lineno}: {msg}"));
                Ok(())
            } else {
                Err(Error::parse(&display, lineno, msg))
            }
        };
        let fields = split_fields(&line);
        if fields.len() <= *cols.iter().max().unwrap() {
            bad(format!("expected at least {} fields", cols.iter().max().unwrap() + 1))?;
            continue;
        }
        let parse_i64 = |s: &str| s.parse::<i64>();
        let parse_i32 = |s: &str| s.parse::<i32>();
        let (from_paper, to_paper) = match (parse_i64(fields[cols[0]]), parse_i64(fields[cols[1]])) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                bad("bad paper id".into())?;
                continue;
            }
        };
        let (from_year, to_year) = match (parse_i32(fields[cols[2]]), parse_i32(fields[cols[3]])) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                bad("bad year".into())?;
                continue;
            }
        };
        let self_cite = match fields[cols[4]].to_lowercase().as_str() {
            "1" | "true" | "t" => true,
            "0" | "false" | "f" => false,
            other => {
                bad(format!("bad SelfCite value '{other}'"))?;
                continue;
            }
        };
        if let Some(&first) = seen.get(&(from_paper, to_paper)) {
            bad(format!("duplicate citation first seen on line {first}"))?;
            continue;
        }
        seen.insert((from_paper, to_paper), lineno);
        if from_year < to_year {
            report.inverted_year_citations += 1;
        }
        table.rows.push(CitationRow { from_paper, to_paper, from_year, to_year, self_cite });
        report.rows_kept += 1;
    }
    let mut papers: Vec<i64> = table
        .rows
        .iter()
        .flat_map(|r| [r.from_paper, r.to_paper])
        .collect();
    papers.sort_unstable();
    papers.dedup();
    report.distinct_papers = papers.len();
    report.paper_id_range = papers.first().map(|&lo| (lo, *papers.last().unwrap()));
    Ok((table, report))
}

/// Author display names, one per line; line k holds the name of author id k
/// (ids are 1-based in the data layout).
pub fn read_author_names(path: impl AsRef<Path>) -> Result<HashMap<i64, String>> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(&display, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, name)| (i as i64 + 1, name.trim().to_string()))
        .collect())
}

/// Ordered year windows. The default is the 21-window layout used for
/// research trajectories: 1991-2000 down to 2011-2015, with window lengths
/// shrinking from 10 to 5 years so average degrees stay comparable.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub windows: Vec<(i32, i32)>,
}

impl Default for WindowSpec {
    fn default() -> Self {
        let starts = [
            1991, 1992, 1993, 1994, 1995, 1996, 1997, 1998, 1999, 2000, 2001, 2002, 2003, 2004,
            2005, 2006, 2007, 2008, 2009, 2010, 2011,
        ];
        let ends = [
            2000, 2001, 2001, 2002, 2003, 2004, 2004, 2005, 2006, 2007, 2007, 2008, 2009, 2010,
            2010, 2011, 2012, 2013, 2013, 2014, 2015,
        ];
        WindowSpec { windows: starts.into_iter().zip(ends).collect() }
    }
}

impl WindowSpec {
    pub fn new(windows: Vec<(i32, i32)>) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::InvalidParameter("window spec must be nonempty".into()));
        }
        for (i, &(s, e)) in windows.iter().enumerate() {
            if s > e {
                return Err(Error::InvalidParameter(format!("window {} has start > end", i + 1)));
            }
            if i > 0 && windows[i - 1].0 > s {
                return Err(Error::InvalidParameter("windows must be ordered by start year".into()));
            }
        }
        Ok(WindowSpec { windows })
    }

    /// Parse "1991-2000,1992-2001,..." notation.
    pub fn parse(text: &str) -> Result<Self> {
        let windows = text
            .split(',')
            .map(|w| {
                let parts: Vec<&str> = w.trim().split('-').collect();
                if parts.len() != 2 {
                    return Err(Error::InvalidParameter(format!("bad window '{w}'")));
                }
                let s = parts[0]
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad window start '{w}'")))?;
                let e = parts[1]
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad window end '{w}'")))?;
                Ok((s, e))
            })
            .collect::<Result<Vec<_>>>()?;
        WindowSpec::new(windows)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_author_paper_table() {
        let f = write_temp("idxAu\tidxPap\tyear\tjournal\n1\t100\t1995\tAoS\n2\t100\t1995\tAoS\n1\t101\t1996\tBka\n");
        let (table, report) = read_author_paper(f.path(), &ParseOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert_eq!(report.distinct_authors, 2);
        assert_eq!(report.distinct_papers, 2);
        assert_eq!(report.author_id_range, Some((1, 2)));
    }

    #[test]
    fn malformed_row_aborts_with_line_number() {
        let f = write_temp("idxAu,idxPap,year,journal\n1,100,1995,AoS\nx,101,1996,Bka\n");
        let err = read_author_paper(f.path(), &ParseOptions::default()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn permissive_mode_skips_and_counts() {
        let f = write_temp("idxAu,idxPap,year,journal\n1,100,1995,AoS\nx,101,1996,Bka\n1,100,1995,AoS\n");
        let opts = ParseOptions { permissive: true, ..Default::default() };
        let (table, report) = read_author_paper(f.path(), &opts).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(report.rows_skipped, 2);
        assert_eq!(report.anomalies.len(), 2);
    }

    #[test]
    fn year_out_of_range_rejected() {
        let f = write_temp("idxAu,idxPap,year,journal\n1,100,1890,AoS\n");
        assert!(read_author_paper(f.path(), &ParseOptions::default()).is_err());
    }

    #[test]
    fn citations_keep_inverted_years_flagged() {
        let f = write_temp(
            "FromPap,ToPap,FromYear,ToYear,SelfCite\n10,20,1995,1998,0\n11,21,1999,1995,0\n",
        );
        let (table, report) = read_citations(f.path(), &ParseOptions::default()).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(report.inverted_year_citations, 1);
    }

    #[test]
    fn duplicate_citation_rejected() {
        let f = write_temp("FromPap,ToPap,FromYear,ToYear,SelfCite\n10,20,1995,1994,0\n10,20,1995,1994,0\n");
        assert!(read_citations(f.path(), &ParseOptions::default()).is_err());
    }

    #[test]
    fn default_windows_match_published_layout() {
        let spec = WindowSpec::default();
        assert_eq!(spec.len(), 21);
        assert_eq!(spec.windows[0], (1991, 2000));
        assert_eq!(spec.windows[20], (2011, 2015));
        // lengths shrink from 10 to 5
        let lengths: Vec<i32> = spec.windows.iter().map(|&(s, e)| e - s + 1).collect();
        assert_eq!(lengths, vec![10, 10, 9, 9, 9, 9, 8, 8, 8, 8, 7, 7, 7, 7, 6, 6, 6, 6, 5, 5, 5]);
    }

    #[test]
    fn window_spec_parses_and_validates() {
        let spec = WindowSpec::parse("1975-1997, 1995-2007, 2005-2015").unwrap();
        assert_eq!(spec.windows, vec![(1975, 1997), (1995, 2007), (2005, 2015)]);
        assert!(WindowSpec::parse("2000-1999").is_err());
    }

    #[test]
    fn author_names_are_one_based() {
        let f = write_temp("Alice A\nBob B\n");
        let names = read_author_names(f.path()).unwrap();
        assert_eq!(names[&1], "Alice A");
        assert_eq!(names[&2], "Bob B");
    }
}
