#pragma once

// HTTP front for LabelService.
//
//   GET  /api/pair?rater=<id>   -> pair payload, or 204 when nothing is left
//   POST /api/label             <- {"rater", "pair_id", "label"}
//   GET  /api/progress          -> {"labeled", "consensus", "remaining", ...}
//   GET  /api/export            -> truth.jsonl
//
// Any other path is served from the UI directory when one is mounted.

#include <filesystem>
#include <string>

// Eigen has to be seen before httplib.h: <resolv.h> defines a `_res` macro.
#include <Eigen/Core>

#include "httplib.h"
#include "json.hpp"

#include "clonescope/labelsvc.hpp"

namespace clonescope {

inline void install_routes(httplib::Server& server, LabelService& service,
                           const std::filesystem::path& ui_dir = {}) {
    auto send_json = [](httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    };

    server.Get("/api/pair", [&service, send_json](const httplib::Request& req, httplib::Response& res) {
        const auto rater = req.get_param_value("rater");
        if (rater.empty()) return send_json(res, 400, {{"error", "missing rater parameter"}});
        auto pair = service.next_pair(rater);
        if (!pair) {
            res.status = 204;
            return;
        }
        send_json(res, 200, *pair);
    });

    server.Post("/api/label", [&service, send_json](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error&) {
            return send_json(res, 400, {{"error", "request body is not JSON"}});
        }
        if (!body.is_object() || !body.contains("rater") || !body.contains("pair_id") || !body.contains("label") ||
            !body["rater"].is_string() || !body["pair_id"].is_string() || !body["label"].is_string()) {
            return send_json(res, 400, {{"error", "expected string fields rater, pair_id, label"}});
        }
        auto r = service.submit(body["rater"], body["pair_id"], body["label"]);
        switch (r.status) {
            case SubmitStatus::Ok: {
                json ack = to_json(r.progress);
                ack["ok"] = true;
                return send_json(res, 200, ack);
            }
            case SubmitStatus::NotFound: return send_json(res, 404, {{"error", r.message}});
            case SubmitStatus::Invalid: return send_json(res, 400, {{"error", r.message}});
        }
    });

    server.Get("/api/progress", [&service, send_json](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, to_json(service.progress()));
    });

    server.Get("/api/export", [&service](const httplib::Request&, httplib::Response& res) {
        res.set_content(to_jsonl(service.export_truth()), "application/x-ndjson");
    });

    if (!ui_dir.empty()) {
        if (!server.set_mount_point("/", ui_dir.string())) {
            throw ArtifactError("UI directory not found: " + ui_dir.string());
        }
    }
}

}  // namespace clonescope
