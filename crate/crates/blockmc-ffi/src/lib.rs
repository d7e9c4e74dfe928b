//! C ABI over the blockmc classifier.
//!
//! Measures are opaque handles created from the same JSON documents the CLI
//! reads; results come back as JSON strings (reports, measure files) or
//! exact `"num/den"` literals. Every function returns a status code; on any
//! non-OK status the message is available from `blockmc_last_error` until
//! the next call on the same thread.
//!
//! Strings returned through out-parameters are owned by the caller and must
//! be released with `blockmc_string_free`; handles with
//! `blockmc_measure_free`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blockmc::chains::{builtin_fixture, counterexample_fixture, embed_chain};
use blockmc::classify::{check_obmc, classify_all_bounded};
use blockmc::io;
use blockmc::measure::Configuration;
use blockmc::rational::format_ratio;
use blockmc::tree::RootedTree;
use blockmc::JointMeasure;

/// Result of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockmcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input parsed but violated a schema or a mathematical invariant,
    /// or a label was unknown.
    InvalidInput = 3,
    /// Unexpected internal failure.
    Internal = 4,
}

/// Opaque: a joint measure together with its tree.
pub struct BlockmcMeasure {
    tree: RootedTree,
    measure: JointMeasure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: BlockmcStatus, msg: impl Into<String>) -> BlockmcStatus {
    set_error(msg.into());
    status
}

/// # Safety
/// `s` must be null or a valid NUL-terminated C string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, BlockmcStatus> {
    if s.is_null() {
        return Err(fail(BlockmcStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        fail(
            BlockmcStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn emit_string(out: *mut *mut c_char, content: String) -> BlockmcStatus {
    let Ok(c) = CString::new(content) else {
        return fail(BlockmcStatus::Internal, "output contained a NUL byte");
    };
    unsafe { *out = c.into_raw() };
    clear_error();
    BlockmcStatus::Ok
}

fn emit_measure(
    out: *mut *mut BlockmcMeasure,
    tree: RootedTree,
    measure: JointMeasure,
) -> BlockmcStatus {
    let handle = Box::new(BlockmcMeasure { tree, measure });
    unsafe { *out = Box::into_raw(handle) };
    clear_error();
    BlockmcStatus::Ok
}

fn guard(f: impl FnOnce() -> BlockmcStatus) -> BlockmcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(BlockmcStatus::Internal, "internal panic"),
    }
}

/// Last error message on this thread, or null. The returned string must be
/// freed with `blockmc_string_free`.
#[no_mangle]
pub extern "C" fn blockmc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn blockmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a measure handle.
///
/// # Safety
/// `m` must be null or a handle previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_free(m: *mut BlockmcMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Parses a full measure file (JSON).
///
/// # Safety
/// `json` must be a valid NUL-terminated C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_from_json(
    json: *const c_char,
    out: *mut *mut BlockmcMeasure,
) -> BlockmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(BlockmcStatus::NullArgument, "out is null");
        }
        let json = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match io::parse_measure(json) {
            Ok(m) => emit_measure(out, m.tree().clone(), m),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Parses a block Markov spec file (JSON) and realizes it.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_from_bmc_json(
    json: *const c_char,
    out: *mut *mut BlockmcMeasure,
) -> BlockmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(BlockmcStatus::NullArgument, "out is null");
        }
        let json = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match io::parse_bmc(json) {
            Ok(spec) => {
                let m = spec.realize();
                emit_measure(out, spec.tree().clone(), m)
            }
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Embeds a chain file into a tree file; the chain JSON must carry a
/// `time_map`.
///
/// # Safety
/// Both strings must be valid NUL-terminated C strings and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_from_chain_json(
    chain_json: *const c_char,
    tree_json: *const c_char,
    out: *mut *mut BlockmcMeasure,
) -> BlockmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(BlockmcStatus::NullArgument, "out is null");
        }
        let chain = match read_str(chain_json, "chain_json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let tree = match read_str(tree_json, "tree_json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let build = || -> Result<(RootedTree, JointMeasure), blockmc::Error> {
            let parsed = io::parse_chain(chain)?;
            let t = io::parse_tree(tree)?;
            let raw = parsed
                .time_map
                .ok_or_else(|| blockmc::Error::Parse("chain JSON carries no time_map".into()))?;
            let map = io::time_map_for_tree(&t, &raw)?;
            let m = embed_chain(&parsed.spec, &t, &map)?;
            Ok((t, m))
        };
        match build() {
            Ok((t, m)) => emit_measure(out, t, m),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Loads a built-in fixture: "counterexample", "path3" or "binary2".
///
/// # Safety
/// `name` must be a valid NUL-terminated C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_from_fixture(
    name: *const c_char,
    out: *mut *mut BlockmcMeasure,
) -> BlockmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(BlockmcStatus::NullArgument, "out is null");
        }
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match builtin_fixture(name) {
            Some((t, m)) => emit_measure(out, t, m),
            None => fail(
                BlockmcStatus::InvalidInput,
                format!("unknown fixture {name:?}"),
            ),
        }
    })
}

/// Serializes the measure back to its JSON file format.
///
/// # Safety
/// `m` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_measure_to_json(
    m: *const BlockmcMeasure,
    out_json: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if m.is_null() || out_json.is_null() {
            return fail(
                BlockmcStatus::NullArgument,
                "measure or out pointer is null",
            );
        }
        let handle = &*m;
        emit_string(out_json, io::measure_to_json(&handle.measure))
    })
}

/// Runs the full classification and returns the JSON report.
/// `max_subtree_size` caps the Markov-chain subtree sweep; pass 0 for no cap.
///
/// # Safety
/// `m` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_classify(
    m: *const BlockmcMeasure,
    max_subtree_size: usize,
    out_json: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if m.is_null() || out_json.is_null() {
            return fail(
                BlockmcStatus::NullArgument,
                "measure or out pointer is null",
            );
        }
        let handle = &*m;
        let cap = if max_subtree_size == 0 {
            handle.tree.vertex_count()
        } else {
            max_subtree_size
        };
        match classify_all_bounded(&handle.measure, &handle.tree, cap) {
            Ok(report) => emit_string(out_json, io::report_to_json(&report, &handle.tree)),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Checks the block Markov property from `root_label` (or the stored root
/// when null) and returns the JSON verdict.
///
/// # Safety
/// `m` must be a live handle, `root_label` null or a valid C string, and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_check_obmc(
    m: *const BlockmcMeasure,
    root_label: *const c_char,
    out_json: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if m.is_null() || out_json.is_null() {
            return fail(
                BlockmcStatus::NullArgument,
                "measure or out pointer is null",
            );
        }
        let handle = &*m;
        let view = if root_label.is_null() {
            handle.tree.clone()
        } else {
            let label = match read_str(root_label, "root_label") {
                Ok(s) => s,
                Err(status) => return status,
            };
            let Some(id) = handle.tree.vertex_by_label(label) else {
                return fail(
                    BlockmcStatus::InvalidInput,
                    format!("unknown root label {label:?}"),
                );
            };
            match handle.tree.rerooted(id) {
                Ok(t) => t,
                Err(e) => return fail(BlockmcStatus::InvalidInput, e.to_string()),
            }
        };
        match check_obmc(&handle.measure, &view) {
            Ok(verdict) => emit_string(
                out_json,
                io::obmc_report_to_json(view.label(view.root()), &verdict, &view),
            ),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

unsafe fn parse_config(
    handle: &BlockmcMeasure,
    json: *const c_char,
    what: &str,
) -> Result<Configuration, BlockmcStatus> {
    let raw = read_str(json, what)?;
    let map: BTreeMap<String, usize> = serde_json::from_str(raw)
        .map_err(|e| fail(BlockmcStatus::InvalidInput, format!("{what}: {e}")))?;
    let mut cfg = Configuration::empty();
    for (label, sym) in map {
        let Some(v) = handle.tree.vertex_by_label(&label) else {
            return Err(fail(
                BlockmcStatus::InvalidInput,
                format!("{what}: unknown vertex label {label:?}"),
            ));
        };
        cfg.insert(v, sym);
    }
    Ok(cfg)
}

/// Exact cylinder probability of a partial configuration given as a
/// `{"label": symbol, ...}` JSON object; the result is a `"num/den"` string.
///
/// # Safety
/// `m` must be a live handle, `config_json` a valid C string and `out_ratio`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_cylinder_probability(
    m: *const BlockmcMeasure,
    config_json: *const c_char,
    out_ratio: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if m.is_null() || out_ratio.is_null() {
            return fail(
                BlockmcStatus::NullArgument,
                "measure or out pointer is null",
            );
        }
        let handle = &*m;
        let cfg = match parse_config(handle, config_json, "config_json") {
            Ok(c) => c,
            Err(status) => return status,
        };
        match handle.measure.cylinder_probability(&cfg) {
            Ok(p) => emit_string(out_ratio, format_ratio(&p)),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Exact conditional probability `P[target | given]` of two disjoint
/// configurations, as a `"num/den"` string.
///
/// # Safety
/// `m` must be a live handle, both configuration strings valid C strings and
/// `out_ratio` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_conditional_probability(
    m: *const BlockmcMeasure,
    target_json: *const c_char,
    given_json: *const c_char,
    out_ratio: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if m.is_null() || out_ratio.is_null() {
            return fail(
                BlockmcStatus::NullArgument,
                "measure or out pointer is null",
            );
        }
        let handle = &*m;
        let target = match parse_config(handle, target_json, "target_json") {
            Ok(c) => c,
            Err(status) => return status,
        };
        let given = match parse_config(handle, given_json, "given_json") {
            Ok(c) => c,
            Err(status) => return status,
        };
        match handle.measure.conditional_probability(&target, &given) {
            Ok(p) => emit_string(out_ratio, format_ratio(&p)),
            Err(e) => fail(BlockmcStatus::InvalidInput, e.to_string()),
        }
    })
}

/// The four exact conditionals of the built-in counter-example, as JSON.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn blockmc_counterexample_values(
    out_json: *mut *mut c_char,
) -> BlockmcStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(BlockmcStatus::NullArgument, "out is null");
        }
        let f = counterexample_fixture();
        let value = serde_json::json!({
            "bmc_lhs": format_ratio(&f.expected.bmc_lhs),
            "bmc_rhs": format_ratio(&f.expected.bmc_rhs),
            "mc_lhs": format_ratio(&f.expected.mc_lhs),
            "mc_rhs": format_ratio(&f.expected.mc_rhs),
        });
        emit_string(out_json, io::pretty(&value))
    })
}
