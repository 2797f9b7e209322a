#pragma once

// Verification reports: one record per check, JSON-serializable.

#include <json.hpp>

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace braidcheck {

using json = nlohmann::ordered_json;

enum class Status { pass, fail, inconclusive, skipped };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::inconclusive: return "inconclusive";
        case Status::skipped: return "skipped";
    }
    return "?";
}

struct CheckRecord {
    std::string id;
    json params = json::object();
    Status status = Status::pass;
    std::string note;
    json witness;      // set on failure
    json certificate;  // kept out of the main report; written separately by the CLI
    std::string certificate_ref;
    double elapsed_ms = 0;
};

class Report {
public:
    CheckRecord& add(CheckRecord r) {
        checks_.push_back(std::move(r));
        return checks_.back();
    }
    /// Run `body` under a timer; exceptions become a failed record.
    CheckRecord& run(const std::string& id, json params, const std::function<void(CheckRecord&)>& body) {
        CheckRecord rec;
        rec.id = id;
        rec.params = std::move(params);
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(rec);
        } catch (const std::exception& e) {
            rec.status = Status::fail;
            rec.witness = json{{"exception", e.what()}};
        }
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return add(std::move(rec));
    }
    void merge(const Report& other) {
        for (const auto& c : other.checks_) checks_.push_back(c);
    }

    const std::vector<CheckRecord>& checks() const { return checks_; }
    std::vector<CheckRecord>& checks() { return checks_; }

    std::size_t count(Status s) const {
        std::size_t n = 0;
        for (const auto& c : checks_) n += c.status == s;
        return n;
    }
    /// No failures (and, when strict, nothing inconclusive).
    bool ok(bool strict = false) const {
        return count(Status::fail) == 0 && (!strict || count(Status::inconclusive) == 0);
    }
    const CheckRecord* find(const std::string& id) const {
        for (const auto& c : checks_)
            if (c.id == id) return &c;
        return nullptr;
    }

    json to_json(bool with_timing = true) const {
        json arr = json::array();
        for (const auto& c : checks_) {
            json j{{"id", c.id}, {"params", c.params}, {"status", to_string(c.status)}};
            if (!c.note.empty()) j["note"] = c.note;
            if (!c.witness.is_null()) j["witness"] = c.witness;
            if (!c.certificate_ref.empty()) j["certificate"] = c.certificate_ref;
            if (with_timing) j["elapsed_ms"] = c.elapsed_ms;
            arr.push_back(std::move(j));
        }
        return json{{"checks", arr},
                    {"summary",
                     {{"total", checks_.size()},
                      {"pass", count(Status::pass)},
                      {"fail", count(Status::fail)},
                      {"inconclusive", count(Status::inconclusive)},
                      {"skipped", count(Status::skipped)}}}};
    }

private:
    std::vector<CheckRecord> checks_;
};

}  // namespace braidcheck
