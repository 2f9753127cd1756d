#include "dyspec/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dyspec
{
namespace
{
void reject_unknown_keys(Json const& obj, std::string const& path, std::vector<std::string> const& allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
    {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
        {
            std::string field = path.empty() ? it.key() : path + "." + it.key();
            throw ConfigError(field, "unknown field");
        }
    }
}

Json const* child(Json const& obj, std::string const& key, std::string const& path, Json::value_t type)
{
    if (!obj.contains(key))
        return nullptr;
    Json const& v = obj[key];
    std::string field = path.empty() ? key : path + "." + key;
    bool ok = v.type() == type;
    if (type == Json::value_t::number_float)
        ok = v.is_number();
    if (!ok)
        throw ConfigError(field, "has the wrong type");
    return &v;
}

void read_number(Json const& obj, std::string const& key, std::string const& path, double& out)
{
    if (auto const* v = child(obj, key, path, Json::value_t::number_float))
        out = v->get<double>();
}

template<class Int>
void read_integer(Json const& obj, std::string const& key, std::string const& path, Int& out)
{
    if (!obj.contains(key))
        return;
    Json const& v = obj[key];
    std::string field = path + "." + key;
    if (!v.is_number_integer())
        throw ConfigError(field, "must be an integer");
    if constexpr (std::is_unsigned_v<Int>)
    {
        if (v.is_number_unsigned() || v.get<long long>() >= 0)
            out = v.get<Int>();
        else
            throw ConfigError(field, "must be non-negative");
    }
    else
    {
        out = v.get<Int>();
    }
}

std::vector<double> read_number_list(Json const& v, std::string const& field)
{
    if (!v.is_array())
        throw ConfigError(field, "must be an array of numbers");
    std::vector<double> out;
    for (auto const& e : v)
    {
        if (!e.is_number())
            throw ConfigError(field, "must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Json object_or_throw(Json const& v, std::string const& field)
{
    if (!v.is_object())
        throw ConfigError(field, "must be an object");
    return v;
}

}  // namespace

SpectrumParams RunConfig::spectrum_params() const
{
    SpectrumParams p;
    p.T = T;
    p.W = W;
    p.step = step;
    p.qr_every = qr_every;
    p.merge_tol = merge_tol;
    p.burn_in = burn_in;
    p.window_stride = window_stride;
    p.threads = threads;
    return p;
}

RunConfig parse_config(Json const& j)
{
    if (!j.is_object())
        throw ConfigError("", "configuration must be a JSON object");
    reject_unknown_keys(j, "", {"flow", "integration", "ensemble", "tasks", "output_dir", "threads"});

    RunConfig c;

    if (!j.contains("flow"))
        throw ConfigError("flow", "is required");
    Json flow = object_or_throw(j["flow"], "flow");
    reject_unknown_keys(flow, "flow", {"name", "params"});
    if (!flow.contains("name") || !flow["name"].is_string())
        throw ConfigError("flow.name", "must be a string");
    c.flow_name = flow["name"].get<std::string>();
    if (auto const* params = child(flow, "params", "flow", Json::value_t::object))
    {
        for (auto it = params->begin(); it != params->end(); ++it)
        {
            if (!it.value().is_number())
                throw ConfigError("flow.params." + it.key(), "must be a number");
            c.flow_params[it.key()] = it.value().get<double>();
        }
    }

    if (j.contains("integration"))
    {
        Json in = object_or_throw(j["integration"], "integration");
        reject_unknown_keys(in, "integration",
                            {"step", "T", "W", "qr_every", "merge_tol", "burn_in", "window_stride",
                             "amplitude_form"});
        read_number(in, "step", "integration", c.step);
        read_number(in, "T", "integration", c.T);
        read_number(in, "W", "integration", c.W);
        read_integer(in, "qr_every", "integration", c.qr_every);
        read_number(in, "merge_tol", "integration", c.merge_tol);
        // transient discard defaults to the first half of the horizon
        c.burn_in = c.T / 2;
        read_number(in, "burn_in", "integration", c.burn_in);
        read_number(in, "window_stride", "integration", c.window_stride);
        if (auto const* form = child(in, "amplitude_form", "integration", Json::value_t::string))
        {
            try
            {
                c.amplitude_form = amplitude_form_from_string(form->get<std::string>());
            }
            catch (InputError const& e)
            {
                throw ConfigError("integration.amplitude_form", e.what());
            }
        }
    }

    if (j.contains("ensemble"))
    {
        Json en = object_or_throw(j["ensemble"], "ensemble");
        reject_unknown_keys(en, "ensemble", {"size", "seed", "anchors"});
        read_integer(en, "size", "ensemble", c.ensemble_size);
        read_integer(en, "seed", "ensemble", c.seed);
        if (auto const* anchors = child(en, "anchors", "ensemble", Json::value_t::array))
        {
            for (std::size_t i = 0; i < anchors->size(); ++i)
            {
                std::string field = "ensemble.anchors[" + std::to_string(i) + "]";
                Json a = object_or_throw((*anchors)[i], field);
                reject_unknown_keys(a, field, {"x", "eta"});
                if (!a.contains("x") || !a.contains("eta"))
                    throw ConfigError(field, "needs both 'x' and 'eta'");
                c.anchors.push_back({read_number_list(a["x"], field + ".x"), read_number_list(a["eta"], field + ".eta")});
            }
        }
    }

    if (j.contains("tasks"))
    {
        Json tasks = object_or_throw(j["tasks"], "tasks");
        reject_unknown_keys(tasks, "tasks", {"spectrum_B", "spectrum_X", "spectrum_BXm", "mane", "euler_ess"});
        if (auto const* v = child(tasks, "spectrum_B", "tasks", Json::value_t::boolean))
            c.spectrum_B = v->get<bool>();
        if (auto const* v = child(tasks, "spectrum_X", "tasks", Json::value_t::boolean))
            c.spectrum_X = v->get<bool>();
        if (tasks.contains("spectrum_BXm"))
        {
            Json bxm = object_or_throw(tasks["spectrum_BXm"], "tasks.spectrum_BXm");
            reject_unknown_keys(bxm, "tasks.spectrum_BXm", {"m"});
            if (!bxm.contains("m"))
                throw ConfigError("tasks.spectrum_BXm.m", "is required");
            c.spectrum_BXm = read_number_list(bxm["m"], "tasks.spectrum_BXm.m");
            if (c.spectrum_BXm.empty())
                throw ConfigError("tasks.spectrum_BXm.m", "must not be empty");
        }
        if (tasks.contains("mane"))
        {
            Json mane = object_or_throw(tasks["mane"], "tasks.mane");
            reject_unknown_keys(mane, "tasks.mane", {"lambdas", "N", "ratio_threshold", "grid_size"});
            c.mane.enabled = true;
            if (!mane.contains("lambdas"))
                throw ConfigError("tasks.mane.lambdas", "is required");
            c.mane.lambdas = read_number_list(mane["lambdas"], "tasks.mane.lambdas");
            read_integer(mane, "N", "tasks.mane", c.mane.N);
            read_number(mane, "ratio_threshold", "tasks.mane", c.mane.ratio_threshold);
            read_integer(mane, "grid_size", "tasks.mane", c.mane.grid_size);
        }
        if (tasks.contains("euler_ess"))
        {
            Json ess = object_or_throw(tasks["euler_ess"], "tasks.euler_ess");
            reject_unknown_keys(ess, "tasks.euler_ess", {"m", "t"});
            c.euler_ess.enabled = true;
            read_number(ess, "m", "tasks.euler_ess", c.euler_ess.m);
            read_number(ess, "t", "tasks.euler_ess", c.euler_ess.t);
        }
    }

    if (auto const* v = child(j, "output_dir", "", Json::value_t::string))
        c.output_dir = v->get<std::string>();
    read_integer(j, "threads", "", c.threads);

    validate_config(c);
    return c;
}

void validate_config(RunConfig const& c)
{
    FlowPtr flow;
    try
    {
        flow = make_flow(c.flow_name, c.flow_params);
    }
    catch (InputError const& e)
    {
        std::string msg = e.what();
        bool unknown_flow = msg.rfind("unknown flow", 0) == 0;
        throw ConfigError(unknown_flow ? "flow.name" : "flow.params", msg);
    }

    auto positive = [](double v, char const* field) {
        if (!(v > 0))
            throw ConfigError(field, "must be positive");
    };
    positive(c.step, "integration.step");
    positive(c.T, "integration.T");
    positive(c.W, "integration.W");
    positive(c.merge_tol, "integration.merge_tol");
    positive(c.window_stride, "integration.window_stride");
    if (c.qr_every < 1)
        throw ConfigError("integration.qr_every", "must be at least 1");
    if (c.W > c.T / 4)
        throw ConfigError("integration.W", "must not exceed T/4");
    if (c.T < 10 * c.qr_every * c.step)
        throw ConfigError("integration.T", "must be at least 10 * qr_every * step");
    if (c.burn_in < 0 || c.burn_in + c.W > c.T)
        throw ConfigError("integration.burn_in", "must lie in [0, T - W]");

    if (c.ensemble_size < 1)
        throw ConfigError("ensemble.size", "must be at least 1");
    if (c.anchors.size() > c.ensemble_size)
        throw ConfigError("ensemble.anchors", "more anchors than ensemble.size");
    for (std::size_t i = 0; i < c.anchors.size(); ++i)
    {
        auto const& a = c.anchors[i];
        std::string field = "ensemble.anchors[" + std::to_string(i) + "]";
        if (a.x.size() != static_cast<std::size_t>(flow->dim()) || a.eta.size() != a.x.size())
            throw ConfigError(field, "must have " + std::to_string(flow->dim()) + " components in x and eta");
        double nn = 0;
        for (double e : a.eta)
            nn += e * e;
        if (!(nn > 0))
            throw ConfigError(field + ".eta", "must be nonzero");
    }

    if (c.mane.enabled)
    {
        if (c.mane.N < 4)
            throw ConfigError("tasks.mane.N", "must be at least 4");
        if (!(c.mane.ratio_threshold > 0 && c.mane.ratio_threshold <= 1))
            throw ConfigError("tasks.mane.ratio_threshold", "must lie in (0, 1]");
        if (c.mane.grid_size < 1)
            throw ConfigError("tasks.mane.grid_size", "must be at least 1");
        if (c.mane.lambdas.empty())
            throw ConfigError("tasks.mane.lambdas", "must not be empty");
    }
    if (c.euler_ess.enabled)
    {
        if (c.euler_ess.m == 0)
            throw ConfigError("tasks.euler_ess.m", "must be nonzero");
        positive(c.euler_ess.t, "tasks.euler_ess.t");
    }
    if (c.threads < 1)
        throw ConfigError("threads", "must be at least 1");
    if (c.output_dir.empty())
        throw ConfigError("output_dir", "must not be empty");
}

RunConfig load_config(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("", "cannot open configuration file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string const text = buffer.str();

    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                col = 1;
            }
            else
            {
                ++col;
            }
        }
        throw ConfigError("", "parse error at line " + std::to_string(line) + ", column " + std::to_string(col)
                                  + ": " + e.what());
    }
    return parse_config(j);
}

Json config_to_json(RunConfig const& c)
{
    Json params = Json::object();
    FlowPtr flow = make_flow(c.flow_name, c.flow_params);
    for (auto const& [k, v] : flow->params())
        params[k] = v;

    Json anchors = Json::array();
    for (auto const& a : c.anchors)
        anchors.push_back(Json{{"x", a.x}, {"eta", a.eta}});

    Json tasks = Json::object();
    tasks["spectrum_B"] = c.spectrum_B;
    tasks["spectrum_X"] = c.spectrum_X;
    if (!c.spectrum_BXm.empty())
        tasks["spectrum_BXm"] = Json{{"m", c.spectrum_BXm}};
    if (c.mane.enabled)
        tasks["mane"] = Json{{"lambdas", c.mane.lambdas},
                             {"N", c.mane.N},
                             {"ratio_threshold", c.mane.ratio_threshold},
                             {"grid_size", c.mane.grid_size}};
    if (c.euler_ess.enabled)
        tasks["euler_ess"] = Json{{"m", c.euler_ess.m}, {"t", c.euler_ess.t}};

    return Json{{"flow", {{"name", c.flow_name}, {"params", params}}},
                {"integration",
                 {{"step", c.step},
                  {"T", c.T},
                  {"W", c.W},
                  {"qr_every", c.qr_every},
                  {"merge_tol", c.merge_tol},
                  {"burn_in", c.burn_in},
                  {"window_stride", c.window_stride},
                  {"amplitude_form", to_string(c.amplitude_form)}}},
                {"ensemble", {{"size", c.ensemble_size}, {"seed", c.seed}, {"anchors", anchors}}},
                {"tasks", tasks},
                {"output_dir", c.output_dir}};
}

}  // namespace dyspec
