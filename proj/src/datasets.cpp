#include "phipp/datasets.hpp"

#include "phipp/io.hpp"

namespace phipp::datasets {

const std::string& stock_prices_csv() {
    static const std::string csv =
        "date,renault,peugeot\n"
        "23/07/10,34.9,24.2\n"
        "22/07/10,34.26,24.01\n"
        "21/07/10,33.15,23.3\n"
        "20/07/10,32.69,22.78\n"
        "19/07/10,33.24,23.36\n"
        "16/07/10,33.92,23.77\n"
        "15/07/10,34.44,23.71\n"
        "14/07/10,35.08,24.36\n"
        "13/07/10,35.28,24.37\n"
        "12/07/10,33.84,23.16\n"
        "09/07/10,33.46,23.13\n"
        "08/07/10,33.08,22.65\n"
        "07/07/10,32.15,22.19\n"
        "06/07/10,31.12,21.56\n"
        "05/07/10,30.02,20.81\n"
        "02/07/10,30.17,20.85\n"
        "01/07/10,29.56,20.05\n"
        "30/06/10,30.78,21.07\n"
        "29/06/10,30.55,20.97\n"
        "28/06/10,32.34,22.3\n"
        "25/06/10,31.35,21.68\n"
        "24/06/10,32.29,22.25\n"
        "23/06/10,33.58,22.47\n"
        "22/06/10,33.84,22.77\n"
        "21/06/10,34.06,23.25\n"
        "18/06/10,32.89,22.7\n"
        "17/06/10,32.08,22.31\n"
        "16/06/10,31.87,21.92\n"
        "15/06/10,32.03,22.12\n"
        "14/06/10,31.45,22.2\n"
        "11/06/10,30.62,21.42\n"
        "10/06/10,30.42,20.93\n"
        "09/06/10,29.27,20.34\n"
        "08/06/10,28.48,19.73\n"
        "07/06/10,28.92,20.15\n"
        "04/06/10,29.19,20.27\n"
        "03/06/10,30.35,20.46\n"
        "02/06/10,29.33,19.53\n"
        "01/06/10,28.87,19.45\n"
        "31/05/10,29.39,19.54\n"
        "28/05/10,29.16,19.55\n"
        "27/05/10,29.18,19.81\n"
        "26/05/10,27.5,18.5\n"
        "25/05/10,26.76,18.08\n"
        "24/05/10,28.75,18.81\n"
        "21/05/10,28.78,18.82\n"
        "20/05/10,28.53,18.84\n"
        "19/05/10,29.49,19.25\n"
        "18/05/10,30.95,19.76\n"
        "17/05/10,30.92,19.35\n"
        "14/05/10,31.35,19.34\n"
        "13/05/10,33.65,20.76\n"
        "12/05/10,33.63,20.52\n"
        "11/05/10,33.38,20.34\n"
        "10/05/10,33.28,20.3\n"
        "07/05/10,31,19.24\n"
        "06/05/10,32.4,20.22\n"
        "05/05/10,32.95,20.45\n"
        "04/05/10,33.3,21.03\n"
        "03/05/10,35.58,22.63\n"
        "30/04/10,35.41,22.45\n"
        "29/04/10,35.53,22.36\n"
        "28/04/10,34.75,22.33\n"
        "27/04/10,36.2,22.9\n"
        "26/04/10,37.65,23.73\n"
        "23/04/10,36.72,23.5\n"
        "22/04/10,34.36,22.72\n"
        "21/04/10,35.01,22.86\n"
        "20/04/10,35.62,22.88\n"
        "19/04/10,34.08,21.77\n"
        "16/04/10,34.46,21.71\n"
        "15/04/10,35.16,22.22\n"
        "14/04/10,35.1,22.22\n"
        "13/04/10,35.28,22.45\n"
        "12/04/10,35.17,21.85\n"
        "09/04/10,35.76,21.9\n"
        "08/04/10,35.67,21.67\n"
        "07/04/10,36.5,21.89\n"
        "06/04/10,36.87,22\n"
        "01/04/10,35.5,21.97\n"
        "31/03/10,34.7,21.8\n"
        "30/03/10,34.8,22.24\n"
        "29/03/10,35.7,22.73\n"
        "26/03/10,35.54,22.58\n"
        "25/03/10,35.53,22.73\n"
        "24/03/10,33.8,21.82\n"
        "23/03/10,34.1,21.58\n"
        "22/03/10,33.73,21.64\n"
        "19/03/10,34.12,21.68\n"
        "18/03/10,34.44,21.75\n"
        "17/03/10,34.68,21.98\n"
        "16/03/10,34.33,21.88\n"
        "15/03/10,33.57,21.53\n"
        "12/03/10,33.9,21.86\n"
        "11/03/10,33.27,21.58\n"
        "10/03/10,33.12,21.47\n"
        "09/03/10,32.69,21.54\n"
        "08/03/10,32.99,21.66\n"
        "05/03/10,32.89,21.85\n"
        "04/03/10,31.64,21.26\n"
        "03/03/10,31.65,20.7\n"
        "02/03/10,31.05,20.2\n"
        "01/03/10,30.26,19.54\n"
        "26/02/10,30.2,19.39\n"
        "25/02/10,29.42,18.98\n"
        "24/02/10,30.9,19.49\n"
        "23/02/10,30.54,19.74\n"
        "22/02/10,31.89,20.06\n"
        "19/02/10,32.29,20.67\n"
        "18/02/10,32.26,20.41\n"
        "17/02/10,31.69,20.31\n"
        "16/02/10,31.08,19.8\n"
        "15/02/10,30.25,19.66\n"
        "12/02/10,29.56,19.57\n"
        "11/02/10,31,20.4\n"
        "10/02/10,32.78,21.21\n"
        "09/02/10,33.31,22.31\n"
        "08/02/10,32.63,21.95\n"
        "05/02/10,32.15,22.33\n"
        "04/02/10,33.72,22.86\n"
        "03/02/10,35.32,23.93\n"
        "02/02/10,35.29,23.8\n"
        "01/02/10,35.31,24.05\n"
        "29/01/10,34.26,23.64\n"
        "28/01/10,33.94,23.31\n"
        "27/01/10,33.85,23.88\n"
        "26/01/10,34.97,24.86\n"
        "25/01/10,35.06,24.35\n"
        "22/01/10,35.7,24.95\n"
        "21/01/10,36.1,25\n"
        "20/01/10,36.92,25.35\n"
        "19/01/10,38.4,25.81\n"
        "18/01/10,39.28,25.95\n"
        "15/01/10,38.6,25.7\n"
        "14/01/10,39.56,26.67\n"
        "13/01/10,39.49,26.13\n"
        "12/01/10,38.36,25.98\n"
        "11/01/10,39.21,26.65\n"
        "08/01/10,39.38,26.5\n"
        "07/01/10,39.69,26.7\n"
        "06/01/10,39.25,26.32\n"
        "05/01/10,38.31,24.74\n"
        "04/01/10,38.2,24.52\n";
    return csv;
}

Eigen::MatrixXd stock_prices() {
    return read_csv(stock_prices_csv()).data;
}

}  // namespace phipp::datasets
