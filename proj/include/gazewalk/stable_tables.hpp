#pragma once

// Generated by tools/make_stable_tables.cpp -- do not edit by hand.
// Quantile spreads of the standard S0 stable law, 8000000 draws per cell.

namespace gazewalk::stable_tables {

inline constexpr unsigned kAlphaCount = 31;
inline constexpr unsigned kBetaCount = 5;

inline constexpr double kAlphaGrid[kAlphaCount] = {
    0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95,
    1.00, 1.05, 1.10, 1.15, 1.20, 1.25, 1.30, 1.35, 1.40, 1.45,
    1.50, 1.55, 1.60, 1.65, 1.70, 1.75, 1.80, 1.85, 1.90, 1.95,
    2.00};

inline constexpr double kBetaGrid[kBetaCount] = {0.00, 0.25, 0.50, 0.75, 1.00};

inline constexpr double kNuAlpha[kAlphaCount][kBetaCount] = {
    {44.627799, 40.432681, 33.163132, 29.341569, 27.925626},
    {31.448125, 29.038892, 24.021936, 21.168723, 20.263148},
    {23.654779, 21.892232, 18.424986, 16.302144, 15.689644},
    {18.449337, 17.244778, 14.707925, 12.976176, 12.551401},
    {14.904822, 14.014289, 12.066975, 10.741529, 10.379204},
    {12.384595, 11.672960, 10.215609, 9.139109, 8.864389},
    {10.502373, 9.964675, 8.807073, 7.933655, 7.729830},
    {9.049059, 8.645289, 7.731804, 6.996358, 6.820043},
    {7.933967, 7.619137, 6.867381, 6.276741, 6.130946},
    {7.041957, 6.778833, 6.189459, 5.701644, 5.587081},
    {6.310660, 6.111042, 5.627271, 5.226277, 5.134540},
    {5.715056, 5.548217, 5.171770, 4.843910, 4.759379},
    {5.220280, 5.091645, 4.790709, 4.517170, 4.454381},
    {4.802837, 4.701973, 4.461391, 4.245729, 4.192061},
    {4.454796, 4.375282, 4.173329, 4.013740, 3.969553},
    {4.142519, 4.085648, 3.932444, 3.803251, 3.771262},
    {3.889359, 3.839485, 3.728539, 3.626040, 3.606864},
    {3.657655, 3.626609, 3.538882, 3.469957, 3.455913},
    {3.464895, 3.442872, 3.384098, 3.330489, 3.322020},
    {3.295641, 3.279321, 3.238836, 3.206216, 3.200602},
    {3.149720, 3.134235, 3.117655, 3.092763, 3.090189},
    {3.021578, 3.017717, 3.002406, 2.996035, 2.990010},
    {2.913401, 2.913290, 2.905431, 2.899033, 2.901953},
    {2.822618, 2.818631, 2.819997, 2.818803, 2.822371},
    {2.738309, 2.738169, 2.741202, 2.742698, 2.746068},
    {2.669466, 2.670305, 2.669597, 2.673358, 2.678741},
    {2.609100, 2.612789, 2.609999, 2.615246, 2.616621},
    {2.558700, 2.559187, 2.558353, 2.561321, 2.563525},
    {2.511920, 2.512023, 2.514332, 2.513530, 2.516641},
    {2.472390, 2.473759, 2.473731, 2.473438, 2.474157},
    {2.437056, 2.441455, 2.438400, 2.437250, 2.439455},
};

inline constexpr double kNuBeta[kAlphaCount][kBetaCount] = {
    {0.000000, 0.508442, 0.837958, 0.970232, 0.984693},
    {0.000000, 0.473507, 0.801829, 0.954567, 0.974814},
    {0.000000, 0.441407, 0.768994, 0.936250, 0.962156},
    {0.000000, 0.412251, 0.733926, 0.914396, 0.945930},
    {0.000000, 0.384742, 0.698219, 0.889812, 0.926851},
    {0.000000, 0.360211, 0.666415, 0.863519, 0.905068},
    {0.000000, 0.338845, 0.634295, 0.834331, 0.880958},
    {0.000000, 0.321542, 0.603633, 0.803050, 0.853594},
    {0.000000, 0.305426, 0.572595, 0.769864, 0.824569},
    {0.000000, 0.283776, 0.542571, 0.735520, 0.794008},
    {0.000000, 0.268559, 0.513700, 0.699153, 0.761273},
    {0.000000, 0.252748, 0.485432, 0.661800, 0.727595},
    {0.000000, 0.237257, 0.456676, 0.623445, 0.693052},
    {0.000000, 0.221424, 0.427505, 0.586147, 0.657396},
    {0.000000, 0.206443, 0.398372, 0.547167, 0.621089},
    {0.000000, 0.190054, 0.370821, 0.507848, 0.583191},
    {0.000000, 0.176754, 0.342237, 0.470549, 0.546468},
    {0.000000, 0.161861, 0.312583, 0.431671, 0.507998},
    {0.000000, 0.148848, 0.285675, 0.394010, 0.469146},
    {0.000000, 0.133406, 0.256553, 0.356705, 0.429315},
    {0.000000, 0.118385, 0.228363, 0.319143, 0.389224},
    {0.000000, 0.104269, 0.200540, 0.283595, 0.349102},
    {0.000000, 0.089329, 0.173884, 0.247027, 0.309004},
    {0.000000, 0.075195, 0.148107, 0.212533, 0.268941},
    {0.000000, 0.062387, 0.123127, 0.178461, 0.228145},
    {0.000000, 0.049925, 0.098892, 0.145320, 0.187312},
    {0.000000, 0.039176, 0.076275, 0.113121, 0.147121},
    {0.000000, 0.027475, 0.054937, 0.082478, 0.108482},
    {0.000000, 0.017509, 0.035454, 0.053063, 0.070839},
    {0.000000, 0.008817, 0.017238, 0.025835, 0.034393},
    {0.000000, -0.000319, -0.000238, -0.000057, -0.000327},
};

inline constexpr double kNuC[kAlphaCount][kBetaCount] = {
    {2.568581, 3.052948, 4.511881, 6.612405, 9.067136},
    {2.426203, 2.801499, 3.932961, 5.544523, 7.384063},
    {2.321469, 2.619460, 3.530861, 4.793394, 6.223925},
    {2.241073, 2.488674, 3.220989, 4.246503, 5.379978},
    {2.181274, 2.381863, 2.996642, 3.829536, 4.772013},
    {2.131093, 2.298351, 2.815465, 3.514522, 4.281251},
    {2.091546, 2.237207, 2.669198, 3.261069, 3.907368},
    {2.062822, 2.185167, 2.552304, 3.054425, 3.600927},
    {2.033922, 2.144340, 2.454691, 2.879874, 3.351009},
    {2.015748, 2.111556, 2.377483, 2.741090, 3.142098},
    {2.000776, 2.081097, 2.310191, 2.622085, 2.966359},
    {1.987095, 2.056703, 2.250361, 2.516698, 2.818438},
    {1.978619, 2.036116, 2.202272, 2.429554, 2.693939},
    {1.970841, 2.018025, 2.160788, 2.357515, 2.582626},
    {1.964653, 2.003289, 2.123005, 2.291448, 2.489039},
    {1.957098, 1.992827, 2.092898, 2.235226, 2.402957},
    {1.953102, 1.980959, 2.064125, 2.184307, 2.330284},
    {1.948461, 1.972658, 2.041097, 2.144152, 2.264888},
    {1.945879, 1.963327, 2.022026, 2.106209, 2.209535},
    {1.942060, 1.957029, 2.001904, 2.070935, 2.157839},
    {1.937712, 1.951753, 1.986476, 2.042801, 2.115329},
    {1.935964, 1.944340, 1.973155, 2.016520, 2.075245},
    {1.932172, 1.938740, 1.961084, 1.995233, 2.041853},
    {1.928451, 1.934413, 1.950428, 1.976637, 2.012833},
    {1.926995, 1.929652, 1.941239, 1.961412, 1.986236},
    {1.923010, 1.926185, 1.933347, 1.947184, 1.963766},
    {1.919907, 1.920148, 1.928588, 1.934624, 1.947505},
    {1.915620, 1.917683, 1.919457, 1.924756, 1.932051},
    {1.913828, 1.914773, 1.915599, 1.917606, 1.919841},
    {1.911540, 1.910074, 1.911099, 1.911130, 1.912086},
    {1.908508, 1.905769, 1.907731, 1.909149, 1.908776},
};

inline constexpr double kNuZeta[kAlphaCount][kBetaCount] = {
    {0.000000, -0.060322, -0.279385, -0.660993, -1.198354},
    {0.000000, -0.069741, -0.276368, -0.618868, -1.086879},
    {0.000000, -0.077507, -0.273895, -0.581356, -0.995555},
    {0.000000, -0.084818, -0.267707, -0.548507, -0.920279},
    {0.000000, -0.089371, -0.261265, -0.518808, -0.855491},
    {0.000000, -0.092251, -0.255102, -0.494262, -0.795101},
    {0.000000, -0.095885, -0.249659, -0.467761, -0.742597},
    {0.000000, -0.097432, -0.243765, -0.446095, -0.695364},
    {0.000000, -0.099423, -0.236327, -0.424341, -0.653280},
    {0.000000, -0.098559, -0.231556, -0.403323, -0.611834},
    {0.000000, -0.097933, -0.223907, -0.384601, -0.576407},
    {0.000000, -0.097530, -0.215800, -0.363905, -0.539885},
    {0.000000, -0.094826, -0.208501, -0.346151, -0.508666},
    {0.000000, -0.091411, -0.200294, -0.328008, -0.476448},
    {0.000000, -0.089148, -0.191208, -0.310037, -0.447015},
    {0.000000, -0.087384, -0.182687, -0.293720, -0.418192},
    {0.000000, -0.083518, -0.174148, -0.273816, -0.389075},
    {0.000000, -0.079692, -0.163863, -0.258699, -0.362796},
    {0.000000, -0.074686, -0.155011, -0.241161, -0.336712},
    {0.000000, -0.070432, -0.144674, -0.223944, -0.310131},
    {0.000000, -0.065882, -0.134331, -0.205766, -0.283296},
    {0.000000, -0.059860, -0.123682, -0.188020, -0.256566},
    {0.000000, -0.054897, -0.110907, -0.168873, -0.230971},
    {0.000000, -0.049340, -0.100497, -0.151676, -0.204114},
    {0.000000, -0.043448, -0.086789, -0.133251, -0.177377},
    {0.000000, -0.037780, -0.075086, -0.112196, -0.152321},
    {0.000000, -0.030273, -0.061168, -0.092719, -0.123938},
    {0.000000, -0.024527, -0.047605, -0.070687, -0.095751},
    {0.000000, -0.016597, -0.031812, -0.049133, -0.065730},
    {0.000000, -0.007357, -0.015907, -0.024764, -0.033413},
    {0.000000, 0.000299, -0.000127, 0.000416, -0.000656},
};

}  // namespace gazewalk::stable_tables
