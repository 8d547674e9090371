//! JSON form of a multiplication table: a header plus one product record per line.

use serde::{Deserialize, Serialize};

use crate::exactfield::Scalar;

use super::{BasisIndex, Element, ProductTable, Sector, StructureError, StructureSystem, Window};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub theta: String,
    pub epsilon: String,
}

impl TableHeader {
    pub fn sector(&self) -> Result<Sector, StructureError> {
        Sector::parse_theta(&self.theta)
    }

    pub fn is_symbolic(&self) -> bool {
        self.epsilon == "symbolic"
    }
}

#[derive(Deserialize)]
struct HeaderOnly {
    header: TableHeader,
}

/// Header of a table document, without parsing the coefficients.
pub fn read_header(text: &str) -> Result<TableHeader, StructureError> {
    serde_json::from_str::<HeaderOnly>(text)
        .map(|d| d.header)
        .map_err(|e| StructureError::Parse(format!("table header: {e}")))
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    basis: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ProductRecord {
    left: String,
    right: String,
    result: Vec<TermRecord>,
}

#[derive(Deserialize)]
struct TableDocument {
    header: TableHeader,
    products: Vec<ProductRecord>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain string records always serialize")
}

/// Serialise `table`; the output depends only on its contents.
pub fn write_table<S: Scalar>(header: &TableHeader, table: &ProductTable<S>) -> String {
    let mut out = format!("{{\"header\":{},\"products\":[\n", to_json(header));
    let mut first = true;
    for (&(left, right), product) in table.iter() {
        if !first {
            out.push_str(",\n");
        }
        first = false;
        let record = ProductRecord {
            left: left.to_string(),
            right: right.to_string(),
            result: product
                .terms()
                .map(|(b, c)| TermRecord {
                    basis: b.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        };
        out.push_str(&to_json(&record));
    }
    out.push_str("\n]}\n");
    out
}

/// Parse a table written by [`write_table`] with coefficients in `S`.
pub fn parse_table<S: Scalar>(text: &str) -> Result<(TableHeader, ProductTable<S>), StructureError> {
    let doc: TableDocument =
        serde_json::from_str(text).map_err(|e| StructureError::Parse(format!("table json: {e}")))?;
    let sector = doc.header.sector()?;
    let mut table = ProductTable::default();
    for rec in doc.products {
        let left: BasisIndex = rec.left.parse()?;
        let right: BasisIndex = rec.right.parse()?;
        let mut product = Element::zero();
        for t in rec.result {
            let b: BasisIndex = t.basis.parse()?;
            product.add_term(b.check_sector(sector)?, S::parse_exact(&t.coeff)?);
        }
        if table.get(left, right).is_some() {
            return Err(StructureError::Parse(format!("duplicate product {left}*{right}")));
        }
        table.insert(left.check_sector(sector)?, right.check_sector(sector)?, product);
    }
    Ok((doc.header, table))
}

impl<S: Scalar> StructureSystem<S> {
    pub fn header(&self) -> TableHeader {
        TableHeader {
            theta: self.sector().theta_str().to_string(),
            epsilon: self.epsilon_label().to_string(),
        }
    }

    /// JSON multiplication table of every basis pair in `window`.
    pub fn table_json(&self, window: &Window) -> Result<String, StructureError> {
        Ok(write_table(&self.header(), &self.product_table(window)?))
    }

    /// Table-backed system from JSON produced by [`table_json`](Self::table_json).
    pub fn from_table_json(text: &str) -> Result<Self, StructureError> {
        let (header, table) = parse_table(text)?;
        Self::from_table(header.sector()?, table, header.epsilon)
    }
}
