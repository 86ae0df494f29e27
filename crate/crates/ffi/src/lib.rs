//! C ABI over the bugonomics library.
//!
//! Every fallible function returns a [`BugonomicsStatus`] and writes its
//! result through an out-pointer. On failure the message is available from
//! [`bugonomics_last_error`] on the same thread. Strings returned by the
//! library are owned by the caller and released with [`bugonomics_string_free`];
//! report handles are released with [`bugonomics_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bugonomics::io::{fixture, parse_campaign, parse_scenario};
use bugonomics::lint::{has_fatal, validate_campaign_report, CampaignReport};
use bugonomics::metrics::campaign_summary;
use bugonomics::model::{HourlyRate, Hours, Money, Stage, StageEffort};
use bugonomics::sim::{bottleneck_report, simulate};
use bugonomics::{Error, ExitClass};

/// Result codes. The first four match the command-line exit statuses.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BugonomicsStatus {
    Ok = 0,
    /// Fatal lint or validation findings.
    Findings = 1,
    /// Malformed input: parse, schema or value errors.
    Input = 2,
    /// The computation is undefined or overflowed.
    Computation = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// Opaque handle to a parsed campaign report.
pub struct BugonomicsReport {
    report: CampaignReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(BugonomicsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_class() {
            ExitClass::Findings => BugonomicsStatus::Findings,
            ExitClass::Input => BugonomicsStatus::Input,
            ExitClass::Computation => BugonomicsStatus::Computation,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(BugonomicsStatus::NullArgument, format!("{name} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BugonomicsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BugonomicsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            BugonomicsStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            BugonomicsStatus::InvalidUtf8,
            format!("{name} is not valid UTF-8"),
        )
    })
}

unsafe fn report<'a>(p: *const BugonomicsReport) -> Result<&'a CampaignReport, Failure> {
    p.as_ref().map(|h| &h.report).ok_or_else(|| null("report"))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> Result<CString, Failure> {
    CString::new(s).map_err(|_| Failure(BugonomicsStatus::Internal, "output contains NUL".into()))
}

unsafe fn write_json<T: serde::Serialize + ?Sized>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let json =
        serde_json::to_string(value).map_err(|e| Failure(BugonomicsStatus::Internal, e.to_string()))?;
    out.write(c_string(json)?.into_raw());
    Ok(())
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next library call on the same thread.
#[no_mangle]
pub extern "C" fn bugonomics_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bugonomics_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a campaign document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_parse(
    json: *const c_char,
    out: *mut *mut BugonomicsReport,
) -> BugonomicsStatus {
    guard(|| {
        let report = parse_campaign(text(json, "json")?, "<ffi>")?;
        write_out(out, Box::into_raw(Box::new(BugonomicsReport { report })), "out")
    })
}

/// Loads a built-in fixture by name, such as `firefox_opus46`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_fixture(
    name: *const c_char,
    out: *mut *mut BugonomicsReport,
) -> BugonomicsStatus {
    guard(|| {
        let name = text(name, "name")?;
        let report = fixture(name).ok_or_else(|| {
            Failure(
                BugonomicsStatus::Input,
                format!("no built-in fixture named {name:?}"),
            )
        })??;
        write_out(out, Box::into_raw(Box::new(BugonomicsReport { report })), "out")
    })
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_free(report: *mut BugonomicsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Accepted fraction as an unreduced numerator and denominator.
///
/// # Safety
/// `report` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_precision(
    report: *const BugonomicsReport,
    numerator: *mut u64,
    denominator: *mut u64,
) -> BugonomicsStatus {
    guard(|| {
        let summary = campaign_summary(self::report(report)?)?;
        let p = summary.precision.ok_or_else(|| {
            Failure(
                BugonomicsStatus::Computation,
                "accepted fraction needs exact submitted and accepted counts".into(),
            )
        })?;
        write_out(numerator, p.numerator(), "numerator")?;
        write_out(denominator, p.denominator(), "denominator")
    })
}

/// Derived metrics as a JSON object.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_summary_json(
    report: *const BugonomicsReport,
    out: *mut *mut c_char,
) -> BugonomicsStatus {
    guard(|| write_json(out, &campaign_summary(self::report(report)?)?))
}

/// Lint findings as a JSON array. Returns `Findings` (with the array still
/// written) when any finding is fatal.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_report_lint_json(
    report: *const BugonomicsReport,
    out: *mut *mut c_char,
) -> BugonomicsStatus {
    guard(|| {
        let findings = validate_campaign_report(self::report(report)?);
        write_json(out, &findings)?;
        if has_fatal(&findings) {
            let n = findings.iter().filter(|f| f.is_fatal()).count();
            return Err(Failure(
                BugonomicsStatus::Findings,
                format!("{n} fatal finding(s)"),
            ));
        }
        Ok(())
    })
}

/// Parses a dollar amount such as `"1234.56"` into micro-dollars.
///
/// # Safety
/// `usd` must be a NUL-terminated string; `micros` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_money_parse(usd: *const c_char, micros: *mut i64) -> BugonomicsStatus {
    guard(|| {
        let m: Money = text(usd, "usd")?.parse()?;
        write_out(micros, m.micros(), "micros")
    })
}

/// Labor cost of `item_count` items at `hours_per_item` hours each and
/// `usd_per_hour`, in micro-dollars. Hours and rate are decimal strings.
///
/// # Safety
/// The strings must be NUL-terminated; `micros` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_stage_cost(
    item_count: u64,
    hours_per_item: *const c_char,
    usd_per_hour: *const c_char,
    micros: *mut i64,
) -> BugonomicsStatus {
    guard(|| {
        let effort = StageEffort {
            stage: Stage::Validation,
            hours_per_item: text(hours_per_item, "hours_per_item")?.parse::<Hours>()?,
            rate: text(usd_per_hour, "usd_per_hour")?.parse::<HourlyRate>()?,
        };
        let cost = bugonomics::cost::stage_cost(item_count, &effort)?;
        write_out(micros, cost.micros(), "micros")
    })
}

/// Runs a simulator scenario document and returns
/// `{"result": ..., "bottleneck": ...}` as JSON.
///
/// # Safety
/// `scenario_json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bugonomics_simulate_json(
    scenario_json: *const c_char,
    out: *mut *mut c_char,
) -> BugonomicsStatus {
    guard(|| {
        let config = parse_scenario(text(scenario_json, "scenario_json")?, "<ffi>")?;
        let result = simulate(&config)?;
        let bottleneck = bottleneck_report(&result, &config)?;
        write_json(
            out,
            &serde_json::json!({ "result": result, "bottleneck": bottleneck }),
        )
    })
}
