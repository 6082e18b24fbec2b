#include "sigmod/sigmod.h"

#include <new>
#include <string>

#include "commands.hpp"

struct sigmod_config {
    sigmod::JobConfig job;
};

struct sigmod_report {
    std::string text;
    std::string verdict;
    int exit_code = 0;
    sigmod_status status = SIGMOD_OK;
};

namespace {

thread_local std::string last_error;

sigmod_status to_status(sigmod::ErrorCode code) { return static_cast<sigmod_status>(static_cast<int>(code) + 1); }

sigmod_status record(sigmod_status s, std::string message) {
    last_error = std::move(message);
    return s;
}

}  // namespace

extern "C" {

const char* sigmod_version(void) { return "0.1.0"; }

const char* sigmod_status_name(sigmod_status status) {
    if (status == SIGMOD_OK) return "Ok";
    if (status == SIGMOD_NULL_ARGUMENT) return "NullArgument";
    if (status < SIGMOD_OK || status > SIGMOD_INVALID_ARGUMENT) return "Unknown";
    return sigmod::error_name(static_cast<sigmod::ErrorCode>(static_cast<int>(status) - 1));
}

const char* sigmod_last_error(void) { return last_error.c_str(); }

sigmod_status sigmod_config_new(sigmod_config** out) {
    if (!out) return record(SIGMOD_NULL_ARGUMENT, "null output pointer");
    *out = new (std::nothrow) sigmod_config();
    if (!*out) return record(SIGMOD_NUMERICAL_FAILURE, "out of memory");
    last_error.clear();
    return SIGMOD_OK;
}

void sigmod_config_free(sigmod_config* config) { delete config; }

sigmod_status sigmod_config_set(sigmod_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return record(SIGMOD_NULL_ARGUMENT, "null argument");
    try {
        sigmod::JobConfig next = config->job;
        next.set(key, value);
        next.validate();
        config->job = next;
    } catch (const sigmod::Error& e) {
        return record(to_status(e.code()), e.detail());
    }
    last_error.clear();
    return SIGMOD_OK;
}

const char* sigmod_commands(void) {
    static const std::string list = [] {
        std::string s;
        for (const auto& name : sigmod::command_names()) s += (s.empty() ? "" : " ") + name;
        return s;
    }();
    return list.c_str();
}

sigmod_status sigmod_run(const sigmod_config* config, const char* command, const char* input, size_t input_len, sigmod_report** out) {
    if (!config || !command || !input || !out) return record(SIGMOD_NULL_ARGUMENT, "null argument");
    *out = nullptr;
    try {
        sigmod::CommandOutcome r = sigmod::run_command(command, config->job, std::string(input, input_len));
        auto* rep = new sigmod_report();
        rep->text = sigmod::io::dump(r.report);
        rep->verdict = r.verdict;
        rep->exit_code = r.exit_code;
        rep->status = r.error ? to_status(*r.error) : SIGMOD_OK;
        *out = rep;
        if (r.error) return record(rep->status, r.report.value("detail", std::string()));
        last_error.clear();
        return SIGMOD_OK;
    } catch (const std::bad_alloc&) {
        return record(SIGMOD_NUMERICAL_FAILURE, "out of memory");
    }
}

const char* sigmod_report_text(const sigmod_report* report) { return report ? report->text.c_str() : ""; }
const char* sigmod_report_verdict(const sigmod_report* report) { return report ? report->verdict.c_str() : ""; }
int sigmod_report_exit_code(const sigmod_report* report) { return report ? report->exit_code : 2; }
sigmod_status sigmod_report_status(const sigmod_report* report) { return report ? report->status : SIGMOD_NULL_ARGUMENT; }
void sigmod_report_free(sigmod_report* report) { delete report; }

}  // extern "C"
