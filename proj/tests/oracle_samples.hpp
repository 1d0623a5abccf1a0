#pragma once

#include <vector>

// Reference values computed with scipy 1.15.3 (scipy.stats.shapiro) before
// the implementation was written.
namespace decoy::testkit {

struct ShapiroCase {
    std::vector<double> sample;
    double w;
    double p;
};

inline const std::vector<ShapiroCase>& shapiro_cases() {
    static const std::vector<ShapiroCase> cases = {
        {{2.31, 4.87, 1.05, 3.66, 7.42, 2.98, 5.15, 3.02, 9.81, 4.44}, 0.9328845325004936, 0.47685671880278835},
        {{1.7811, 1.2359, 0.5453, 0.7508, 1.0880, 0.7211, 0.3400, 1.2068, 0.5984, 0.4514,
          0.5185, 0.7739, 3.2645, 0.8093, 1.1299, 0.8050, 0.7574, 1.4540, 0.6932, 2.0757,
          0.5121, 1.7378, 2.1676, 0.9382, 1.2386, 0.2914, 2.6798, 0.6085, 1.9118, 1.8446},
         0.8883091338499228, 0.004399944480906188},
        {{10.8965, 11.5998, 11.2902, 9.7919,  10.3491, 12.4779, 10.2005, 8.4958,  10.4977, 12.0393,
          9.0806,  10.1364, 12.4195, 8.8646,  11.3562, 10.1710, 8.2240,  9.1235,  12.7815, 10.1894,
          10.4224, 12.5083, 8.4086,  8.4290,  11.6763, 11.0606, 10.0540, 12.8977, 12.8236, 7.4479,
          11.1215, 12.5923, 7.5172,  11.3800, 12.3243, 9.9351,  7.3640,  12.6910, 11.5139, 11.4525,
          10.3790, 9.1092,  7.9142,  9.2518,  8.3640,  8.8727,  9.5450,  11.6809, 10.5840, 13.5037,
          9.8623,  10.2877, 9.4864,  9.7579,  11.3217, 10.6730, 13.1674, 8.1274,  6.7471,  8.2635,
          10.7270, 10.6349, 11.5225, 14.6610, 10.4744, 10.0931, 11.1013, 13.7915, 7.8069,  14.2880,
          12.2419, 11.3967, 12.3742, 11.7607, 11.3429, 9.8851,  9.1798,  12.2208, 11.0910, 6.9382,
          14.5961, 8.6598,  14.9022, 10.5854, 11.3189, 10.8156, 5.7596,  12.0692, 9.4411,  7.8618,
          11.6931, 12.8806, 8.4409,  6.9972,  10.5001, 9.3019,  10.7277, 11.9886, 9.2986,  15.5934},
         0.9946546791889213, 0.9652025656599489},
    };
    return cases;
}

}  // namespace decoy::testkit
