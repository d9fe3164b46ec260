#pragma once

#include <stdexcept>
#include <string>

namespace histforce {

// Error taxonomy shared by the whole workbench.
//
//   invalid_input      caller broke a precondition (bad index, width mismatch, ...)
//   clause_violation   an amalgamation well-formedness clause failed; carries the
//                      clause name ("alpha", "beta", "gamma", "delta")
//   format_error       malformed serialized input (schema, key order, unsorted lists)
//   resource_limit     a hard size guard tripped (table rows, height, domain width)
//   internal_error     a machine-checked law the construction guarantees was violated;
//                      reaching this always means a bug in this library
//   search_failure     a search operation found no qualifying object

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_input : public error {
public:
    explicit invalid_input(const std::string& what) : error(what) {}
};

class clause_violation : public invalid_input {
public:
    clause_violation(std::string clause, const std::string& what)
        : invalid_input("clause (" + clause + "): " + what), clause_(std::move(clause)) {}
    const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

class format_error : public error {
public:
    explicit format_error(const std::string& what) : error(what) {}
};

class resource_limit : public error {
public:
    explicit resource_limit(const std::string& what) : error(what) {}
};

class internal_error : public error {
public:
    explicit internal_error(const std::string& what) : error(what) {}
};

class search_failure : public error {
public:
    explicit search_failure(const std::string& what) : error(what) {}
};

} // namespace histforce
