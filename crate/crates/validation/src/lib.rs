//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! criterion and exits nonzero when any criterion fails. It lives in its own
//! package so that it runs after every other test of the workspace.
