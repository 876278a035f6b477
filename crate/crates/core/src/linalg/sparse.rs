/// Symmetric sparse matrix in compressed-row form, both triangles stored.
#[derive(Clone, Debug)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Accumulates symmetric entries; duplicates are summed.
#[derive(Clone, Debug, Default)]
pub struct TripletBuilder {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        TripletBuilder {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    pub fn add_diag(&mut self, i: usize, v: f64) {
        self.rows[i].push((i, v));
    }

    /// Adds `v` at `(i, j)` and `(j, i)`.
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i].push((j, v));
        self.rows[j].push((i, v));
    }

    /// Adds the edge energy `w (x_i - x_j)²`.
    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) {
        self.add_diag(i, w);
        self.add_diag(j, w);
        self.add_sym(i, j, -w);
    }

    pub fn build(self) -> SparseSym {
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in self.rows {
            row.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseSym {
            n: self.n,
            row_ptr,
            cols,
            vals,
        }
    }
}

impl SparseSym {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(column, value)` pairs of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .cloned()
            .zip(self.vals[r].iter().cloned())
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.row(i).find(|e| e.0 == i).map_or(0.0, |e| e.1)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            y[i] = s;
        }
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }
}
