namespace soergel {}
