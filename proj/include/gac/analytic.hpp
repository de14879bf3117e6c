#pragma once

#include <cmath>
#include <stdexcept>

#include "geom.hpp"

namespace gac {

// closed-form test fields with exact gradient and level-set curvature.
// gaussian: u = exp(-((x-x0)^2 + (y-y0)^2) / (2 sigma^2)), circular level
// sets traversed with inward unit gradient, so div(grad u / |grad u|) = -1/r.
// conic: u = sqrt((x-x0)^2/alpha^2 + (y-y0)^2/beta^2), elliptic level sets;
// curvature from the standard quotient (uxx uy^2 - 2 uxy ux uy + uyy ux^2)
// over |grad u|^3.
struct AnalyticField {
    enum class Kind { gaussian, conic };

    Kind kind = Kind::gaussian;
    double x0 = 0.5, y0 = 0.5;
    double sigma = 0.25;          // gaussian scale
    double alpha = 0.4, beta = 0.3; // conic semi-axis scales

    static AnalyticField gaussian(double sigma, double x0, double y0) {
        if (!(sigma > 0.0)) throw std::invalid_argument("AnalyticField: sigma must be positive");
        AnalyticField f;
        f.kind = Kind::gaussian;
        f.sigma = sigma;
        f.x0 = x0;
        f.y0 = y0;
        return f;
    }

    static AnalyticField conic(double alpha, double beta, double x0, double y0) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("AnalyticField: alpha and beta must be positive");
        AnalyticField f;
        f.kind = Kind::conic;
        f.alpha = alpha;
        f.beta = beta;
        f.x0 = x0;
        f.y0 = y0;
        return f;
    }

    double value(const Point2& p) const {
        const double X = p.x - x0, Y = p.y - y0;
        if (kind == Kind::gaussian)
            return std::exp(-(X * X + Y * Y) / (2.0 * sigma * sigma));
        return std::sqrt(X * X / (alpha * alpha) + Y * Y / (beta * beta));
    }

    Vec2 gradient(const Point2& p) const {
        const double X = p.x - x0, Y = p.y - y0;
        if (kind == Kind::gaussian) {
            const double u = value(p);
            const double s2 = sigma * sigma;
            return {-X * u / s2, -Y * u / s2};
        }
        const double u = value(p);
        if (u < 1e-30) return {0.0, 0.0}; // apex, direction undefined
        return {X / (alpha * alpha * u), Y / (beta * beta * u)};
    }

    // curvature of the level set through p, equal to div(grad u / |grad u|)
    double level_curvature(const Point2& p) const {
        const double X = p.x - x0, Y = p.y - y0;
        if (kind == Kind::gaussian) {
            const double r = std::hypot(X, Y);
            if (r < 1e-30) return 0.0;
            return -1.0 / r;
        }
        const double u = value(p);
        if (u < 1e-30) return 0.0; // apex, curvature undefined
        const double a2 = alpha * alpha, b2 = beta * beta;
        const double u3 = u * u * u;
        const double ux = X / (a2 * u);
        const double uy = Y / (b2 * u);
        const double uxx = 1.0 / (a2 * u) - X * X / (a2 * a2 * u3);
        const double uyy = 1.0 / (b2 * u) - Y * Y / (b2 * b2 * u3);
        const double uxy = -X * Y / (a2 * b2 * u3);
        const double g2 = ux * ux + uy * uy;
        return (uxx * uy * uy - 2.0 * uxy * ux * uy + uyy * ux * ux) / (g2 * std::sqrt(g2));
    }
};

} // namespace gac
