//! Binary encoding of a [`SemanticSpace`].
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! offset  size        field
//! 0       8           magic  b"MFSPACE\0"
//! 8       2           version (u16) = 1
//! 10      2           flags (u16); bit 0 = stemmed vocabulary, others 0
//! 12      1           weighting (0 raw, 1 log-entropy, 2 tf-idf)
//! 13      3           reserved, zero
//! 16      4           rank k (u32), k >= 1
//! 20      4           number of terms T (u32), k <= T
//! 24      4           number of documents D (u32), k <= D
//! 28      8           SVD seed (u64)
//! 36      8k          singular values (f64), positive, nonincreasing
//! ...     T records   { len: u32, term: len bytes UTF-8, vector: k × f64 }
//! ```
//!
//! Terms must be nonempty, unique and strictly increasing (byte order);
//! all floats finite. Trailing bytes are rejected.

use nalgebra::DMatrix;

use super::matrix::Weighting;
use super::space::SemanticSpace;
use super::LsaError;

pub const MAGIC: [u8; 8] = *b"MFSPACE\0";
pub const VERSION: u16 = 1;
const FLAG_STEMMED: u16 = 1;
const HEADER_LEN: usize = 36;

impl SemanticSpace {
    pub fn to_bytes(&self) -> Vec<u8> {
        let k = self.rank();
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * k + self.terms.len() * (12 + 8 * k));
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        let flags = if self.stemmed { FLAG_STEMMED } else { 0 };
        out.extend_from_slice(&flags.to_le_bytes());
        out.push(self.weighting.code());
        out.extend_from_slice(&[0; 3]);
        out.extend_from_slice(&(k as u32).to_le_bytes());
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.n_docs as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        for s in &self.singular_values {
            out.extend_from_slice(&s.to_le_bytes());
        }
        for (i, term) in self.terms.iter().enumerate() {
            out.extend_from_slice(&(term.len() as u32).to_le_bytes());
            out.extend_from_slice(term.as_bytes());
            for j in 0..k {
                out.extend_from_slice(&self.term_vectors[(i, j)].to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, LsaError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err(LsaError::format("bad magic"));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(LsaError::format(format!("unsupported version {version}")));
        }
        let flags = r.u16()?;
        if flags & !FLAG_STEMMED != 0 {
            return Err(LsaError::format(format!("unknown flags {flags:#06x}")));
        }
        let weighting = Weighting::from_code(r.u8()?)
            .ok_or_else(|| LsaError::format("unknown weighting code"))?;
        if r.take(3)? != [0, 0, 0] {
            return Err(LsaError::format("reserved bytes must be zero"));
        }
        let k = r.u32()? as usize;
        let n_terms = r.u32()? as usize;
        let n_docs = r.u32()? as usize;
        let seed = r.u64()?;
        if k == 0 || k > n_terms || k > n_docs {
            return Err(LsaError::format(format!(
                "rank {k} incompatible with {n_terms} terms and {n_docs} documents"
            )));
        }
        // every record needs at least 4 + 1 + 8k bytes
        let min_body = k
            .checked_mul(8)
            .and_then(|sv| {
                n_terms
                    .checked_mul(5 + 8 * k)
                    .and_then(|t| t.checked_add(sv))
            })
            .ok_or_else(|| LsaError::format("size overflow"))?;
        if min_body > r.remaining() {
            return Err(LsaError::format("truncated body"));
        }

        let mut singular_values = Vec::with_capacity(k);
        for _ in 0..k {
            singular_values.push(r.f64()?);
        }
        if singular_values.iter().any(|s| !s.is_finite() || *s <= 0.0)
            || singular_values.windows(2).any(|w| w[1] > w[0])
        {
            return Err(LsaError::format(
                "singular values must be positive, finite and nonincreasing",
            ));
        }

        let mut terms: Vec<String> = Vec::with_capacity(n_terms);
        let mut data = Vec::with_capacity(n_terms * k);
        for _ in 0..n_terms {
            let len = r.u32()? as usize;
            let raw = r.take(len)?;
            let term = std::str::from_utf8(raw)
                .map_err(|_| LsaError::format("term is not UTF-8"))?;
            if term.is_empty() {
                return Err(LsaError::format("empty term"));
            }
            if let Some(prev) = terms.last() {
                if prev.as_str() >= term {
                    return Err(LsaError::format("terms not strictly increasing"));
                }
            }
            terms.push(term.to_string());
            for _ in 0..k {
                let x = r.f64()?;
                if !x.is_finite() {
                    return Err(LsaError::format("non-finite term vector entry"));
                }
                data.push(x);
            }
        }
        if r.remaining() != 0 {
            return Err(LsaError::format(format!("{} trailing bytes", r.remaining())));
        }
        let term_vectors = DMatrix::from_row_slice(n_terms, k, &data);
        Ok(SemanticSpace::from_parts(
            terms,
            term_vectors,
            singular_values,
            n_docs,
            weighting,
            flags & FLAG_STEMMED != 0,
            seed,
        ))
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], LsaError> {
        if n > self.remaining() {
            return Err(LsaError::format(format!("unexpected end of data at byte {}", self.pos)));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], LsaError> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8, LsaError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, LsaError> {
        self.array().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32, LsaError> {
        self.array().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64, LsaError> {
        self.array().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64, LsaError> {
        self.array().map(f64::from_le_bytes)
    }
}
