use serde::Serialize;

use crate::accumulator::AccumConfig;
use crate::error::Result;
use crate::formats::FormatSpec;

/// Datapath widths for one (input format, accumulator, output format) triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub in_width: u32,
    /// Operand significand bits including the hidden bit.
    pub sig_width: u32,
    pub sig_prod_width: u32,
    /// Range of the weight exponent of a product's unit bit.
    pub exp_prod_min: i64,
    pub exp_prod_max: i64,
    /// Largest left shift that can still land inside the register.
    pub max_shift: u32,
    pub shift_count_width: u32,
    pub acc_width: u32,
    pub out_width: u32,
}

pub fn derive_params(fmt_in: FormatSpec, cfg: AccumConfig, fmt_out: FormatSpec) -> Result<PipelineParams> {
    // the config was validated on construction; re-check to surface bad raw parts
    let cfg = AccumConfig::new(cfg.ovf(), cfg.msb(), cfg.lsb())?;
    let p = fmt_in.precision();
    let (unit_min, unit_max) = match fmt_in {
        FormatSpec::Ieee { frac_bits, .. } => {
            (fmt_in.emin() - i64::from(frac_bits), fmt_in.emax() - i64::from(frac_bits))
        }
        // minpos and maxpos are bare powers of two
        FormatSpec::Posit { .. } => (fmt_in.emin(), fmt_in.emax()),
    };
    let acc_width = cfg.width();
    let exp_prod_max = 2 * unit_max;
    let max_shift = (exp_prod_max - cfg.lsb()).clamp(0, i64::from(acc_width) - 1) as u32;
    let shift_count_width = (u32::BITS - max_shift.leading_zeros()).max(1);
    Ok(PipelineParams {
        in_width: fmt_in.width(),
        sig_width: p,
        sig_prod_width: 2 * p,
        exp_prod_min: 2 * unit_min,
        exp_prod_max,
        max_shift,
        shift_count_width,
        acc_width,
        out_width: fmt_out.width(),
    })
}
