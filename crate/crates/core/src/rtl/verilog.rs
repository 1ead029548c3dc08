use std::fmt::Write;

use super::params::PipelineParams;
use crate::accumulator::AccumConfig;
use crate::error::{Error, Result};
use crate::formats::FormatSpec;

// exponent arithmetic in the emitted code uses 32-bit `integer`
const MAX_GRID_EXP: i64 = 1 << 24;

/// `fdp_<in>_<ovf>_<msb>_<lsb>_<out>`, negative weights spelled `m<k>`.
pub fn default_module_name(fmt_in: FormatSpec, cfg: AccumConfig, fmt_out: FormatSpec) -> String {
    let w = |v: i64| if v < 0 { format!("m{}", -v) } else { v.to_string() };
    format!("fdp_{fmt_in}_{}_{}_{}_{fmt_out}", cfg.ovf(), w(cfg.msb()), w(cfg.lsb()))
}

fn ieee_fields(fmt: FormatSpec, role: &str) -> Result<(u32, u32)> {
    match fmt {
        FormatSpec::Ieee { exp_bits, frac_bits } => Ok((exp_bits, frac_bits)),
        FormatSpec::Posit { .. } => Err(Error::Unsupported(format!(
            "RTL generation supports IEEE-like formats only; {role} format {fmt} is a posit"
        ))),
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Behavioral Verilog-2001 for the FDP datapath: one multiply-accumulate per
/// cycle with `valid_in`; on `last` the product is added, the sum is rounded
/// to nearest even into `fmt_out`, registered on `result` with `valid_out`
/// high for one cycle, and the register is cleared.
pub fn emit_fdp(
    params: &PipelineParams,
    cfg: AccumConfig,
    fmt_in: FormatSpec,
    fmt_out: FormatSpec,
    module_name: &str,
) -> Result<String> {
    let (ie, ifr) = ieee_fields(fmt_in, "input")?;
    let (oe, ofr) = ieee_fields(fmt_out, "output")?;
    if !is_identifier(module_name) {
        return Err(Error::InvalidParameter(format!("`{module_name}` is not a Verilog identifier")));
    }
    if cfg.msb().abs() > MAX_GRID_EXP || cfg.lsb().abs() > MAX_GRID_EXP {
        return Err(Error::Unsupported(format!("accumulator weights beyond ±2^24 in RTL ({cfg})")));
    }
    let expected = super::derive_params(fmt_in, cfg, fmt_out)?;
    if *params != expected {
        return Err(Error::InvalidParameter("pipeline parameters do not match the formats and config".into()));
    }

    let p = params;
    let acc_w = p.acc_width;
    let prod_w = p.sig_prod_width;
    let wide_w = acc_w.max(prod_w);
    let in_bias = fmt_in.bias();
    let shift_bias = 2 * (in_bias + i64::from(ifr)) + cfg.lsb();

    let mut v = String::new();
    let o = &mut v;
    // writing into a String cannot fail
    macro_rules! line {
        ($($t:tt)*) => { writeln!(o, $($t)*).unwrap() };
    }

    line!("// {module_name}: fused dot product, {fmt_in} operands, {fmt_out} result.");
    line!("// Accumulator <ovf {}, msb {}, lsb {}>: {acc_w}-bit two's complement,", cfg.ovf(), cfg.msb(), cfg.lsb());
    line!("// products floored to 2^{}, wrap-around addition, one final rounding (RNE).", cfg.lsb());
    line!("// Generated by fdpgen. Behavioral, one accumulate per cycle, not pipelined.");
    line!("module {module_name} (");
    line!("    input  wire clk,");
    line!("    input  wire rst,");
    line!("    input  wire valid_in,");
    line!("    input  wire last,");
    line!("    input  wire [{}:0] a,", p.in_width - 1);
    line!("    input  wire [{}:0] b,", p.in_width - 1);
    line!("    output reg  valid_out,");
    line!("    output reg  [{}:0] result", p.out_width - 1);
    line!(");");
    line!();
    line!("    localparam integer EXP_W      = {ie};");
    line!("    localparam integer FRAC_W     = {ifr};");
    line!("    localparam integer SIG_W      = {};", p.sig_width);
    line!("    localparam integer PROD_W     = {prod_w};");
    line!("    localparam integer ACC_W      = {acc_w};");
    line!("    localparam integer WIDE_W     = {wide_w};");
    line!("    localparam integer LSB        = {};", cfg.lsb());
    line!("    localparam integer SHIFT_BIAS = {shift_bias};");
    line!("    localparam integer MAX_SHIFT  = {};", p.max_shift);
    line!("    localparam integer OEXP_W     = {oe};");
    line!("    localparam integer OFRAC_W    = {ofr};");
    line!("    localparam integer OBIAS      = {};", fmt_out.bias());
    line!("    localparam integer OEMIN      = {};", fmt_out.emin());
    line!("    localparam integer OEXP_MAX   = {};", (1i64 << oe) - 1);
    line!("    localparam integer NW         = OFRAC_W + 2;");
    line!();
    for x in ["a", "b"] {
        line!("    wire              {x}_sign  = {x}[EXP_W+FRAC_W];");
        line!("    wire [EXP_W-1:0]  {x}_ef    = {x}[EXP_W+FRAC_W-1:FRAC_W];");
        line!("    wire [FRAC_W-1:0] {x}_fr    = {x}[FRAC_W-1:0];");
        line!("    wire              {x}_ezero = ({x}_ef == {{EXP_W{{1'b0}}}});");
        line!("    wire              {x}_eone  = ({x}_ef == {{EXP_W{{1'b1}}}});");
        line!("    wire              {x}_nan   = {x}_eone & ({x}_fr != {{FRAC_W{{1'b0}}}});");
        line!("    wire              {x}_inf   = {x}_eone & ({x}_fr == {{FRAC_W{{1'b0}}}});");
        line!("    wire              {x}_zero  = {x}_ezero & ({x}_fr == {{FRAC_W{{1'b0}}}});");
        line!("    wire [SIG_W-1:0]  {x}_sig   = {{~{x}_ezero, {x}_fr}};");
        line!();
    }
    line!("    wire [PROD_W-1:0] prod_mag  = a_sig * b_sig;");
    line!("    wire              prod_sign = a_sign ^ b_sign;");
    line!("    wire              prod_nan  = a_nan | b_nan | (a_inf & b_zero) | (b_inf & a_zero);");
    line!("    wire              prod_inf  = (a_inf | b_inf) & ~prod_nan;");
    line!();
    line!("    reg signed [{}:0] acc;", acc_w - 1);
    line!("    reg nan_q, pinf_q, ninf_q;");
    line!();
    line!("    // align the product to the accumulator grid, flooring below lsb");
    line!("    integer a_e, b_e, shift, rsh;");
    line!("    reg [WIDE_W-1:0] wide;");
    line!("    reg [ACC_W-1:0]  mag;");
    line!("    reg              sticky;");
    line!("    reg [ACC_W-1:0]  addend;");
    line!("    always @* begin");
    line!("        a_e    = a_ezero ? 1 : a_ef;");
    line!("        b_e    = b_ezero ? 1 : b_ef;");
    line!("        shift  = a_e + b_e - SHIFT_BIAS;");
    line!("        rsh    = 0;");
    line!("        wide   = prod_mag;");
    line!("        sticky = 1'b0;");
    line!("        if (shift >= 0) begin");
    line!("            if (shift <= MAX_SHIFT) wide = wide << shift;");
    line!("            else wide = {{WIDE_W{{1'b0}}}};");
    line!("        end else begin");
    line!("            rsh    = -shift;");
    line!("            sticky = |(prod_mag & ~({{PROD_W{{1'b1}}}} << rsh));");
    line!("            wide   = wide >> rsh;");
    line!("        end");
    line!("        mag = wide[ACC_W-1:0];");
    line!("        if (prod_nan | prod_inf) addend = {{ACC_W{{1'b0}}}};");
    line!("        else if (prod_sign)      addend = -(mag + sticky);");
    line!("        else                     addend = mag;");
    line!("    end");
    line!();
    line!("    wire signed [ACC_W-1:0] acc_next  = acc + addend;");
    line!("    wire                    nan_next  = nan_q | prod_nan;");
    line!("    wire                    pinf_next = pinf_q | (prod_inf & ~prod_sign);");
    line!("    wire                    ninf_next = ninf_q | (prod_inf & prod_sign);");
    line!();
    line!("    // round acc_next * 2^LSB to nearest even");
    line!("    integer i, lead, qexp, drop, biased;");
    line!("    reg              r_neg;");
    line!("    reg [ACC_W-1:0]  r_mag;");
    line!("    reg [ACC_W-1:0]  r_low;");
    line!("    reg [NW-1:0]     r_sig;");
    line!("    reg              r_guard, r_sticky;");
    line!("    reg [{}:0] rounded;", p.out_width - 1);
    line!("    always @* begin");
    line!("        r_neg = acc_next[ACC_W-1];");
    line!("        r_mag = r_neg ? -acc_next : acc_next;");
    line!("        lead  = -1;");
    line!("        for (i = 0; i < ACC_W; i = i + 1)");
    line!("            if (r_mag[i]) lead = i;");
    line!("        if (lead + LSB < OEMIN) qexp = OEMIN - OFRAC_W;");
    line!("        else                    qexp = lead + LSB - OFRAC_W;");
    line!("        drop     = qexp - LSB;");
    line!("        r_guard  = 1'b0;");
    line!("        r_sticky = 1'b0;");
    line!("        r_low    = {{ACC_W{{1'b0}}}};");
    line!("        if (drop <= 0) begin");
    line!("            r_sig = r_mag << (-drop);");
    line!("        end else begin");
    line!("            r_sig    = r_mag >> drop;");
    line!("            r_low    = r_mag >> (drop - 1);");
    line!("            r_guard  = r_low[0];");
    line!("            r_sticky = |(r_mag & ~({{ACC_W{{1'b1}}}} << (drop - 1)));");
    line!("            if (r_guard & (r_sticky | r_sig[0])) r_sig = r_sig + 1'b1;");
    line!("        end");
    line!("        if (r_sig[OFRAC_W+1]) begin");
    line!("            r_sig = r_sig >> 1;");
    line!("            qexp  = qexp + 1;");
    line!("        end");
    line!("        biased = qexp + OFRAC_W + OBIAS;");
    line!("        if (nan_next | (pinf_next & ninf_next))");
    line!("            rounded = {}'h{:X};", p.out_width, fmt_out.nan_bits());
    line!("        else if (pinf_next | ninf_next)");
    line!("            rounded = {{ninf_next, {{OEXP_W{{1'b1}}}}, {{OFRAC_W{{1'b0}}}}}};");
    line!("        else if (lead < 0)");
    line!("            rounded = {{(OEXP_W+OFRAC_W+1){{1'b0}}}};");
    line!("        else if (!r_sig[OFRAC_W])");
    line!("            rounded = {{r_neg, {{OEXP_W{{1'b0}}}}, r_sig[OFRAC_W-1:0]}};");
    line!("        else if (biased >= OEXP_MAX)");
    line!("            rounded = {{r_neg, {{OEXP_W{{1'b1}}}}, {{OFRAC_W{{1'b0}}}}}};");
    line!("        else");
    line!("            rounded = {{r_neg, biased[OEXP_W-1:0], r_sig[OFRAC_W-1:0]}};");
    line!("    end");
    line!();
    line!("    always @(posedge clk) begin");
    line!("        if (rst) begin");
    line!("            acc       <= {{ACC_W{{1'b0}}}};");
    line!("            nan_q     <= 1'b0;");
    line!("            pinf_q    <= 1'b0;");
    line!("            ninf_q    <= 1'b0;");
    line!("            valid_out <= 1'b0;");
    line!("            result    <= {{(OEXP_W+OFRAC_W+1){{1'b0}}}};");
    line!("        end else begin");
    line!("            valid_out <= 1'b0;");
    line!("            if (valid_in) begin");
    line!("                if (last) begin");
    line!("                    result    <= rounded;");
    line!("                    valid_out <= 1'b1;");
    line!("                    acc       <= {{ACC_W{{1'b0}}}};");
    line!("                    nan_q     <= 1'b0;");
    line!("                    pinf_q    <= 1'b0;");
    line!("                    ninf_q    <= 1'b0;");
    line!("                end else begin");
    line!("                    acc       <= acc_next;");
    line!("                    nan_q     <= nan_next;");
    line!("                    pinf_q    <= pinf_next;");
    line!("                    ninf_q    <= ninf_next;");
    line!("                end");
    line!("            end");
    line!("        end");
    line!("    end");
    line!();
    line!("endmodule");
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtl::{derive_params, lint};

    fn emit(fmt_in: FormatSpec, cfg: AccumConfig, fmt_out: FormatSpec) -> Result<String> {
        let p = derive_params(fmt_in, cfg, fmt_out)?;
        emit_fdp(&p, cfg, fmt_in, fmt_out, &default_module_name(fmt_in, cfg, fmt_out))
    }

    #[test]
    fn reference_config() {
        let cfg = AccumConfig::new(30, 30, -30).unwrap();
        let text = emit(FormatSpec::BINARY64, cfg, FormatSpec::BINARY64).unwrap();
        assert!(text.contains("reg signed [90:0] acc;"));
        assert!(text.contains("module fdp_binary64_30_30_m30_binary64 ("));
        assert_eq!(text, emit(FormatSpec::BINARY64, cfg, FormatSpec::BINARY64).unwrap());
        let p = derive_params(FormatSpec::BINARY64, cfg, FormatSpec::BINARY64).unwrap();
        lint(&text, &p).unwrap();
    }

    #[test]
    fn posits_are_unsupported() {
        let cfg = AccumConfig::new(4, 30, -30).unwrap();
        assert!(matches!(emit(FormatSpec::POSIT16_1, cfg, FormatSpec::BINARY32), Err(Error::Unsupported(_))));
        assert!(matches!(emit(FormatSpec::BINARY32, cfg, FormatSpec::POSIT32_2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_bad_names_and_stale_params() {
        let cfg = AccumConfig::new(9, 6, -20).unwrap();
        let f = FormatSpec::BINARY32;
        let p = derive_params(f, cfg, f).unwrap();
        assert!(emit_fdp(&p, cfg, f, f, "1bad").is_err());
        assert!(emit_fdp(&p, cfg, f, f, "has space").is_err());
        let other = AccumConfig::new(9, 6, -21).unwrap();
        assert!(emit_fdp(&p, other, f, f, "ok").is_err());
    }
}
