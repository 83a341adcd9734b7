//! CSV emission and the sorter-complexity table.
//!
//! Schemas are frozen: fixed column order, fixed float formatting, no
//! timing columns, so identical (config, seed) runs produce byte-identical
//! files regardless of worker count or machine load.

use std::io::Write;

use polar::analysis::{cas_for_decoder, PmpTable, SorterKind};
use polar::select::SelectionProfile;

use crate::config::PmpBox;
use crate::run::PointRecord;

/// One row of the sorter-complexity comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CasRow {
    pub node_size: usize,
    pub list_size: usize,
    pub scl: u64,
    pub fast_sscl: u64,
    pub ps_scl: u64,
}

/// Compare-and-select counts of the survivor sorter for SCL, Fast-SSCL and
/// PS-SCL over node sizes {4, 8} and list sizes {4, 8, 16, 32}.
///
/// PS-SCL uses the stair profile recommended for each node size: (4,2,1)
/// for node size 4 and (8,4,2) for node size 8.
pub fn cas_table() -> Vec<CasRow> {
    let mut rows = Vec::new();
    for &node_size in &[4usize, 8] {
        let profile = if node_size == 4 {
            SelectionProfile::new(4, 2, 1).unwrap()
        } else {
            SelectionProfile::new(8, 4, 2).unwrap()
        };
        for &list_size in &[4usize, 8, 16, 32] {
            rows.push(CasRow {
                node_size,
                list_size,
                scl: cas_for_decoder(SorterKind::Scl, node_size, list_size, None).unwrap(),
                fast_sscl: cas_for_decoder(SorterKind::FastSscl, node_size, list_size, None)
                    .unwrap(),
                ps_scl: cas_for_decoder(SorterKind::PsScl, node_size, list_size, Some(&profile))
                    .unwrap(),
            });
        }
    }
    rows
}

/// `esn0_db,frames,bit_errors,frame_errors,bler,ber,bler_ci_low,bler_ci_high`
pub fn write_bler_csv<W: Write>(w: &mut W, records: &[PointRecord]) -> std::io::Result<()> {
    writeln!(
        w,
        "esn0_db,frames,bit_errors,frame_errors,bler,ber,bler_ci_low,bler_ci_high"
    )?;
    for r in records {
        writeln!(
            w,
            "{:.3},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.esn0_db,
            r.frames,
            r.bit_errors,
            r.frame_errors,
            r.bler,
            r.ber,
            r.bler_ci_low,
            r.bler_ci_high
        )?;
    }
    Ok(())
}

/// `node_size,list_size,scl_cas,fast_sscl_cas,ps_scl_cas`
pub fn write_cas_csv<W: Write>(w: &mut W, rows: &[CasRow]) -> std::io::Result<()> {
    writeln!(w, "node_size,list_size,scl_cas,fast_sscl_cas,ps_scl_cas")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.node_size, r.list_size, r.scl, r.fast_sscl, r.ps_scl
        )?;
    }
    Ok(())
}

/// `box,x,y,z,probability_percent` — the share of survivors a full decoder
/// picks from inside each selection box.
pub fn write_boxes_csv<W: Write>(
    w: &mut W,
    boxes: &[PmpBox],
    table: &PmpTable,
) -> std::io::Result<()> {
    writeln!(w, "box,x,y,z,probability_percent")?;
    for b in boxes {
        let p = table
            .box_probability(&b.profile)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
        writeln!(
            w,
            "{},{},{},{},{:.5}",
            b.label.replace(',', "-"),
            b.profile.x(),
            b.profile.y(),
            b.profile.z(),
            100.0 * p
        )?;
    }
    Ok(())
}
