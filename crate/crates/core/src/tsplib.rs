//! TSPLIB instance ingestion and the integer edge-weight conventions.
//!
//! Cities are indexed `0..n` internally. Files and reports use TSPLIB's
//! 1-based numbering, and the conversion happens only at the I/O boundary.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Coordinate instances up to this size get a materialized distance matrix.
pub const MATRIX_LIMIT: usize = 2_000;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("dimension mismatch: header says {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Edge-weight conventions supported by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Euc2d,
    Ceil2d,
    Geo,
    Att,
    Explicit,
}

impl WeightKind {
    pub fn keyword(self) -> &'static str {
        match self {
            WeightKind::Euc2d => "EUC_2D",
            WeightKind::Ceil2d => "CEIL_2D",
            WeightKind::Geo => "GEO",
            WeightKind::Att => "ATT",
            WeightKind::Explicit => "EXPLICIT",
        }
    }

    fn from_keyword(s: &str) -> Result<Self, TsplibError> {
        Ok(match s {
            "EUC_2D" => WeightKind::Euc2d,
            "CEIL_2D" => WeightKind::Ceil2d,
            "GEO" => WeightKind::Geo,
            "ATT" => WeightKind::Att,
            "EXPLICIT" => WeightKind::Explicit,
            other => {
                return Err(TsplibError::UnsupportedFormat(format!(
                    "EDGE_WEIGHT_TYPE {other}"
                )))
            }
        })
    }

    /// Whether the kind is a planar metric that nearest-neighbour pruning can exploit.
    pub fn is_euclidean(self) -> bool {
        matches!(self, WeightKind::Euc2d | WeightKind::Ceil2d | WeightKind::Att)
    }
}

#[derive(Debug, Clone)]
enum Payload {
    Coords(Vec<[f64; 2]>),
    Explicit(Vec<i64>),
}

/// An immutable symmetric TSP instance.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    n: usize,
    kind: WeightKind,
    payload: Payload,
    /// Latitude/longitude in radians, only for GEO.
    geo: Vec<(f64, f64)>,
    matrix: Option<Vec<i32>>,
}

impl Instance {
    /// Builds a coordinate instance. `kind` must not be [`WeightKind::Explicit`].
    pub fn from_coords(
        name: impl Into<String>,
        kind: WeightKind,
        coords: Vec<[f64; 2]>,
    ) -> Result<Self, TsplibError> {
        if kind == WeightKind::Explicit {
            return Err(TsplibError::UnsupportedFormat(
                "EXPLICIT weights need a matrix, not coordinates".into(),
            ));
        }
        if coords.len() < 3 {
            return Err(TsplibError::MalformedFile(format!(
                "at least 3 cities required, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(TsplibError::MalformedFile("non-finite coordinate".into()));
        }
        let geo = if kind == WeightKind::Geo {
            coords.iter().map(|c| (geo_radians(c[0]), geo_radians(c[1]))).collect()
        } else {
            Vec::new()
        };
        let mut inst = Instance {
            name: name.into(),
            n: coords.len(),
            kind,
            payload: Payload::Coords(coords),
            geo,
            matrix: None,
        };
        inst.materialize();
        Ok(inst)
    }

    /// Builds an explicit instance from a full row-major `n x n` matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, weights: Vec<i64>) -> Result<Self, TsplibError> {
        if n < 3 {
            return Err(TsplibError::MalformedFile(format!(
                "at least 3 cities required, got {n}"
            )));
        }
        if weights.len() != n * n {
            return Err(TsplibError::DimensionMismatch {
                expected: n * n,
                found: weights.len(),
            });
        }
        for i in 0..n {
            if weights[i * n + i] != 0 {
                return Err(TsplibError::MalformedFile(format!(
                    "non-zero diagonal at city {}",
                    i + 1
                )));
            }
            for j in 0..i {
                let w = weights[i * n + j];
                if w != weights[j * n + i] {
                    return Err(TsplibError::MalformedFile(format!(
                        "asymmetric weight between cities {} and {}",
                        j + 1,
                        i + 1
                    )));
                }
                if w < 0 {
                    return Err(TsplibError::MalformedFile("negative edge weight".into()));
                }
            }
        }
        Ok(Instance {
            name: name.into(),
            n,
            kind: WeightKind::Explicit,
            payload: Payload::Explicit(weights),
            geo: Vec::new(),
            matrix: None,
        })
    }

    fn materialize(&mut self) {
        let n = self.dimension();
        if n > MATRIX_LIMIT {
            return;
        }
        let mut m = vec![0i32; n * n];
        for i in 0..n {
            for j in 0..i {
                let d = self.compute(i, j) as i32;
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        self.matrix = Some(m);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        match &self.payload {
            Payload::Coords(c) => Some(c),
            Payload::Explicit(_) => None,
        }
    }

    /// Integer distance between cities `i` and `j` under the instance's
    /// rounding convention.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> i64 {
        if let Some(m) = &self.matrix {
            return m[i * self.n + j] as i64;
        }
        self.compute(i, j)
    }

    fn compute(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        match &self.payload {
            Payload::Explicit(w) => w[i * self.n + j],
            Payload::Coords(c) => {
                let (a, b) = (c[i], c[j]);
                let dx = a[0] - b[0];
                let dy = a[1] - b[1];
                match self.kind {
                    WeightKind::Euc2d => ((dx * dx + dy * dy).sqrt() + 0.5) as i64,
                    WeightKind::Ceil2d => (dx * dx + dy * dy).sqrt().ceil() as i64,
                    WeightKind::Att => {
                        let r = ((dx * dx + dy * dy) / 10.0).sqrt();
                        let t = (r + 0.5) as i64;
                        if (t as f64) < r {
                            t + 1
                        } else {
                            t
                        }
                    }
                    WeightKind::Geo => {
                        let (lat_i, lon_i) = self.geo[i];
                        let (lat_j, lon_j) = self.geo[j];
                        let q1 = (lon_i - lon_j).cos();
                        let q2 = (lat_i - lat_j).cos();
                        let q3 = (lat_i + lat_j).cos();
                        let arg = 0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3);
                        (EARTH_RADIUS * arg.clamp(-1.0, 1.0).acos() + 1.0) as i64
                    }
                    WeightKind::Explicit => unreachable!("explicit payload checked above"),
                }
            }
        }
    }

    /// Sum of distances around a closed permutation.
    pub fn tour_length(&self, order: &[usize]) -> i64 {
        let n = order.len();
        (0..n).map(|k| self.distance(order[k], order[(k + 1) % n])).sum()
    }

    /// Serializes the instance back to TSPLIB text.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let n = self.dimension();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {n}");
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.kind.keyword());
        match &self.payload {
            Payload::Coords(c) => {
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (k, p) in c.iter().enumerate() {
                    let _ = writeln!(out, "{} {:?} {:?}", k + 1, p[0], p[1]);
                }
            }
            Payload::Explicit(w) => {
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for row in w.chunks(n) {
                    let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
        }
        out.push_str("EOF\n");
        out
    }
}

// truncated on purpose: GEO distances are defined with this value
#[allow(clippy::approx_constant)]
const GEO_PI: f64 = 3.141592;
const EARTH_RADIUS: f64 = 6378.388;

fn geo_radians(x: f64) -> f64 {
    let deg = x.trunc();
    let min = x - deg;
    GEO_PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// Reads and parses a TSPLIB file from disk.
pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, TsplibError> {
    let text = fs::read_to_string(path)?;
    parse_instance(&text)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MatrixFormat {
    Full,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
    UpperCol,
    LowerCol,
    UpperDiagCol,
    LowerDiagCol,
}

impl MatrixFormat {
    fn from_keyword(s: &str) -> Result<Self, TsplibError> {
        Ok(match s {
            "FULL_MATRIX" => MatrixFormat::Full,
            "UPPER_ROW" => MatrixFormat::UpperRow,
            "LOWER_ROW" => MatrixFormat::LowerRow,
            "UPPER_DIAG_ROW" => MatrixFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" => MatrixFormat::LowerDiagRow,
            "UPPER_COL" => MatrixFormat::UpperCol,
            "LOWER_COL" => MatrixFormat::LowerCol,
            "UPPER_DIAG_COL" => MatrixFormat::UpperDiagCol,
            "LOWER_DIAG_COL" => MatrixFormat::LowerDiagCol,
            other => {
                return Err(TsplibError::UnsupportedFormat(format!(
                    "EDGE_WEIGHT_FORMAT {other}"
                )))
            }
        })
    }

    fn expected_len(self, n: usize) -> usize {
        match self {
            MatrixFormat::Full => n * n,
            MatrixFormat::UpperRow
            | MatrixFormat::LowerRow
            | MatrixFormat::UpperCol
            | MatrixFormat::LowerCol => n * (n - 1) / 2,
            _ => n * (n + 1) / 2,
        }
    }

    /// Visits matrix cells in file order. A column-major upper triangle is a
    /// row-major lower triangle of the symmetric matrix, and vice versa.
    fn cells(self, n: usize) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(self.expected_len(n));
        match self {
            MatrixFormat::Full => {
                for i in 0..n {
                    for j in 0..n {
                        v.push((i, j));
                    }
                }
            }
            MatrixFormat::UpperRow | MatrixFormat::LowerCol => {
                for i in 0..n {
                    for j in i + 1..n {
                        v.push((i, j));
                    }
                }
            }
            MatrixFormat::LowerRow | MatrixFormat::UpperCol => {
                for i in 0..n {
                    for j in 0..i {
                        v.push((i, j));
                    }
                }
            }
            MatrixFormat::UpperDiagRow | MatrixFormat::LowerDiagCol => {
                for i in 0..n {
                    for j in i..n {
                        v.push((i, j));
                    }
                }
            }
            MatrixFormat::LowerDiagRow | MatrixFormat::UpperDiagCol => {
                for i in 0..n {
                    for j in 0..=i {
                        v.push((i, j));
                    }
                }
            }
        }
        v
    }
}

/// Parses TSPLIB text into an [`Instance`].
pub fn parse_instance(text: &str) -> Result<Instance, TsplibError> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut kind: Option<WeightKind> = None;
    let mut format: Option<MatrixFormat> = None;
    let mut coords: Option<Vec<[f64; 2]>> = None;
    let mut weights: Option<Vec<i64>> = None;

    let mut lines = text.lines().peekable();
    while let Some(raw) = lines.next() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            let n = dimension.ok_or_else(|| {
                TsplibError::MalformedFile("NODE_COORD_SECTION before DIMENSION".into())
            })?;
            let mut pts: Vec<Option<[f64; 2]>> = vec![None; n];
            let mut found = 0usize;
            while let Some(next) = lines.peek() {
                let t = next.trim();
                if t.is_empty() {
                    lines.next();
                    continue;
                }
                if !t.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
                    break;
                }
                lines.next();
                let mut it = t.split_whitespace();
                let id = parse_num::<usize>(it.next(), "node id")?;
                let x = parse_num::<f64>(it.next(), "x coordinate")?;
                let y = parse_num::<f64>(it.next(), "y coordinate")?;
                if id == 0 || id > n {
                    found += 1;
                    continue;
                }
                if pts[id - 1].replace([x, y]).is_some() {
                    return Err(TsplibError::MalformedFile(format!("duplicate node {id}")));
                }
                found += 1;
            }
            if found != n || pts.iter().any(Option::is_none) {
                return Err(TsplibError::DimensionMismatch { expected: n, found });
            }
            coords = Some(pts.into_iter().map(Option::unwrap).collect());
            continue;
        }
        if line.starts_with("EDGE_WEIGHT_SECTION") {
            let n = dimension.ok_or_else(|| {
                TsplibError::MalformedFile("EDGE_WEIGHT_SECTION before DIMENSION".into())
            })?;
            let fmt = format.ok_or_else(|| {
                TsplibError::MalformedFile("EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT".into())
            })?;
            let want = fmt.expected_len(n);
            let mut vals = Vec::with_capacity(want);
            while vals.len() < want {
                let Some(next) = lines.peek() else { break };
                let t = next.trim();
                if !t.is_empty() && !t.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
                    break;
                }
                lines.next();
                for tok in t.split_whitespace() {
                    vals.push(parse_num::<f64>(Some(tok), "edge weight")? as i64);
                }
            }
            if vals.len() != want {
                return Err(TsplibError::DimensionMismatch {
                    expected: want,
                    found: vals.len(),
                });
            }
            let mut full = vec![0i64; n * n];
            for ((i, j), w) in fmt.cells(n).into_iter().zip(vals) {
                full[i * n + j] = w;
                if fmt != MatrixFormat::Full {
                    full[j * n + i] = w;
                }
            }
            weights = Some(full);
            continue;
        }
        if line.ends_with("_SECTION") {
            // DISPLAY_DATA_SECTION and friends: skip numeric rows
            while let Some(next) = lines.peek() {
                let t = next.trim();
                if t.is_empty() || t.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
                    lines.next();
                } else {
                    break;
                }
            }
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(TsplibError::MalformedFile(format!("unexpected line: {line}")));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" => {
                if value != "TSP" {
                    return Err(TsplibError::UnsupportedFormat(format!("TYPE {value}")));
                }
            }
            "DIMENSION" => dimension = Some(parse_num(Some(value), "DIMENSION")?),
            "EDGE_WEIGHT_TYPE" => kind = Some(WeightKind::from_keyword(value)?),
            "EDGE_WEIGHT_FORMAT" => format = Some(MatrixFormat::from_keyword(value)?),
            _ => {}
        }
    }

    let n = dimension.ok_or_else(|| TsplibError::MalformedFile("missing DIMENSION".into()))?;
    let kind = kind.ok_or_else(|| TsplibError::MalformedFile("missing EDGE_WEIGHT_TYPE".into()))?;
    match kind {
        WeightKind::Explicit => {
            let w = weights
                .ok_or_else(|| TsplibError::MalformedFile("missing EDGE_WEIGHT_SECTION".into()))?;
            Instance::from_matrix(name, n, w)
        }
        _ => {
            let c = coords
                .ok_or_else(|| TsplibError::MalformedFile("missing NODE_COORD_SECTION".into()))?;
            Instance::from_coords(name, kind, c)
        }
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T, TsplibError> {
    let tok = tok.ok_or_else(|| TsplibError::MalformedFile(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| TsplibError::MalformedFile(format!("bad {what}: {tok}")))
}

/// Parses a TSPLIB `.tour` file into a 0-based permutation.
pub fn parse_tour(text: &str) -> Result<Vec<usize>, TsplibError> {
    let mut dimension = None;
    let mut order = Vec::new();
    let mut in_section = false;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if in_section {
            for tok in line.split_whitespace() {
                let v: i64 = parse_num(Some(tok), "tour node")?;
                if v == -1 {
                    in_section = false;
                    break;
                }
                if v < 1 {
                    return Err(TsplibError::MalformedFile(format!("bad tour node {v}")));
                }
                order.push(v as usize - 1);
            }
            continue;
        }
        if line == "EOF" {
            break;
        }
        if line.starts_with("TOUR_SECTION") {
            in_section = true;
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            if key.trim() == "DIMENSION" {
                dimension = Some(parse_num::<usize>(Some(value.trim()), "DIMENSION")?);
            }
        }
    }
    if let Some(n) = dimension {
        if n != order.len() {
            return Err(TsplibError::DimensionMismatch {
                expected: n,
                found: order.len(),
            });
        }
    }
    let mut seen = vec![false; order.len()];
    for &c in &order {
        if c >= order.len() || std::mem::replace(&mut seen[c], true) {
            return Err(TsplibError::MalformedFile("tour is not a permutation".into()));
        }
    }
    Ok(order)
}

/// Renders a 0-based permutation as a TSPLIB `.tour` file.
pub fn write_tour(name: &str, order: &[usize], length: i64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {name}.{length}.tour");
    let _ = writeln!(out, "COMMENT : Length = {length}");
    let _ = writeln!(out, "TYPE : TOUR");
    let _ = writeln!(out, "DIMENSION : {}", order.len());
    let _ = writeln!(out, "TOUR_SECTION");
    for &c in order {
        let _ = writeln!(out, "{}", c + 1);
    }
    out.push_str("-1\nEOF\n");
    out
}
