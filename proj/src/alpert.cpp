#include "impscat/alpert.hpp"

#include "impscat/error.hpp"

#include <string>

namespace impscat::alpert {

// Nodes and weights solve the moment equations of the rule
// (tools/alpert_rule.py regenerates them at high precision).
const std::array<Node, count>& nodes()
{
    static const std::array<Node, count> table{{
        {0.0008371529832014113271563697, 0.003190919086626234406311362},
        {0.01239382725542636982474909, 0.02423621380426338019027226},
        {0.06009290785739467772076614, 0.07740135521653087933451101},
        {0.180599124960192792927638, 0.1704889420286369087236064},
        {0.4142832599028030884010813, 0.3029123478511308610304135},
        {0.7964747731112429842230295, 0.4652220834914616653323621},
        {1.348993882467058808928366, 0.6401489637096768365019078},
        {2.073471660264395027695197, 0.8051212946181061154402723},
        {2.947904939031493804756887, 0.9362411945698646544249522},
        {3.928129252248611745278372, 1.014359775369075169130039},
        {4.957203086563111694870911, 1.03516772105365680635167},
        {5.986360113977494222055321, 1.020308624984610370790723},
        {6.99795770479151927824202, 1.004798397441513981572314},
        {7.999888757524622397419366, 1.000395017352309274014013},
        {8.999998754306119601289328, 1.000007149422536862756632},
    }};
    return table;
}

void require_points(int n)
{
    if (n <= 2 * skip) {
        throw SpecError("quadrature needs more than " + std::to_string(2 * skip) +
                        " points, got " + std::to_string(n));
    }
}

}  // namespace impscat::alpert
