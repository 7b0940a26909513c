#include "report.hpp"

#include <ostream>

namespace cli {

Report::Report(std::string command, std::vector<std::string> args)
    : command_(std::move(command)), args_(std::move(args)), start_(std::chrono::steady_clock::now()) {}

void Report::result(const std::string& key, json value) { results_.emplace_back(key, std::move(value)); }

void Report::check(const std::string& name, bool pass, json detail) {
    checks_.push_back({name, pass, std::move(detail)});
}

void Report::verdict(const std::string& v, bool negative) {
    verdict_ = v;
    negative_ = negative;
}

bool Report::all_pass() const {
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

int Report::exit_code() const {
    if (!all_pass()) return exit_check_failed;
    return negative_ ? exit_obstructed : exit_ok;
}

double Report::seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

std::string render(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void Report::emit(std::ostream& out, const std::string& format) const {
    int code = exit_code();
    std::string status = code == exit_ok ? "pass" : code == exit_obstructed ? "obstructed" : "check-failed";
    if (format == "summary") {
        out << "exactlift";
        for (const auto& a : args_) out << ' ' << a;
        out << '\n';
        for (const auto& [k, v] : results_) out << "  " << k << " = " << render(v) << '\n';
        if (verdict_) out << "  verdict: " << *verdict_ << '\n';
        for (const auto& c : checks_) {
            out << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
            if (!c.detail.is_null()) out << " (" << render(c.detail) << ')';
            out << '\n';
        }
        out << "  status: " << status << " (exit " << code << ")\n";
        return;
    }
    out << json{{"schema", report_schema}, {"command", command_}, {"args", args_}}.dump() << '\n';
    for (const auto& [k, v] : results_) out << json{{"result", k}, {"value", v}}.dump() << '\n';
    for (const auto& c : checks_) {
        json line{{"check", c.name}, {"pass", c.pass}};
        if (!c.detail.is_null()) line["detail"] = c.detail;
        out << line.dump() << '\n';
    }
    json end{{"status", status}, {"exit", code}};
    if (verdict_) end["verdict"] = *verdict_;
    out << end.dump() << '\n';
}

}  // namespace cli
