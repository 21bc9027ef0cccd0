//! Holds the `acceptance` test target, kept in its own package so that it
//! runs after every other suite in the workspace.
