#include "carbosim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "carbosim/error.hpp"

namespace carbosim {

using nlohmann::json;

namespace {

double require_number(const json& obj, const char* field, const std::string& context) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw ParseError(context + ": missing field '" + field + "'");
    if (!it->is_number())
        throw ParseError(context + ": field '" + field + "' must be a number");
    return it->get<double>();
}

} // namespace

Workload parse_workload(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("workload: malformed JSON: ") + e.what());
    }

    if (!doc.is_array())
        throw ParseError("workload: document must be a JSON array of job objects");

    Workload workload;
    std::set<std::string> ids;
    size_t index = 0;
    for (const json& item : doc) {
        std::string context = "workload job #" + std::to_string(index++);
        if (!item.is_object())
            throw ParseError(context + ": expected an object");

        Job job;
        auto id = item.find("id");
        if (id == item.end() || !id->is_string())
            throw ParseError(context + ": missing string field 'id'");
        job.id = id->get<std::string>();
        if (job.id.empty())
            throw ParseError(context + ": empty id");
        if (!ids.insert(job.id).second)
            throw DuplicateJobId("workload: duplicate job id '" + job.id + "'");
        context = "workload job '" + job.id + "'";

        job.submit_time = require_number(item, "subtime", context);
        if (job.submit_time < 0.0)
            throw ParseError(context + ": subtime must be >= 0");

        double cores = require_number(item, "cores", context);
        if (cores < 1.0 || cores != std::floor(cores) || cores > 1e9)
            throw ParseError(context + ": cores must be a positive integer");
        job.cores_requested = static_cast<int>(cores);

        job.flop_total = require_number(item, "flops", context);
        if (job.flop_total < 0.0)
            throw ParseError(context + ": flops must be >= 0");

        workload.jobs.push_back(std::move(job));
    }

    std::sort(workload.jobs.begin(), workload.jobs.end(), [](const Job& a, const Job& b) {
        if (a.submit_time != b.submit_time)
            return a.submit_time < b.submit_time;
        return a.id < b.id;
    });
    return workload;
}

double job_duration(double flop_total, int cores, double speed_per_core) {
    if (cores < 1)
        throw Error("job_duration: cores must be >= 1");
    if (!(speed_per_core > 0.0))
        throw Error("job_duration: speed_per_core must be > 0");
    if (flop_total == 0.0)
        return 0.0;
    return flop_total / (static_cast<double>(cores) * speed_per_core);
}

} // namespace carbosim
