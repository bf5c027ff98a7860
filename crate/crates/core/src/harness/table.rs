use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

/// Rectangular numeric table with a metadata line, written as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

/// 17 significant digits, `NaN` for missing values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{x:.16e}")
    }
}

impl ResultTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            ..Self::default()
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_owned(), value.to_string());
        self
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `# meta: k=v;…` line, without the trailing newline.
    pub fn meta_line(&self) -> String {
        let pairs: Vec<String> = self
            .metadata
            .iter()
            .map(|(k, v)| format!("{k}={}", v.replace([';', '\n'], " ")))
            .collect();
        format!("# meta: {}", pairs.join(";"))
    }

    /// Header and data lines only; stable across runs.
    pub fn csv_body(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", self.meta_line(), self.csv_body())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        w.flush()
    }

    /// Parses the format produced by [`ResultTable::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# meta: "))
            .ok_or("missing metadata line")?;
        let metadata = meta
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_owned(), v.to_owned()))
                    .ok_or_else(|| format!("bad metadata entry {kv:?}"))
            })
            .collect::<Result<_, _>>()?;
        let header: Vec<String> = lines
            .next()
            .ok_or("missing header")?
            .split(',')
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("row {i}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != header.len() {
                return Err(format!(
                    "row {i} has {} cells, header has {}",
                    row.len(),
                    header.len()
                ));
            }
            rows.push(row);
        }
        Ok(Self {
            header,
            rows,
            metadata,
        })
    }
}
